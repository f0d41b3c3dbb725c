#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "histq/histories.hpp"

// Shared generators and oracles for the test suites. Everything is seeded, so
// runs are reproducible.

namespace histq::testing {

inline Complex random_complex(std::mt19937& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return Complex(normal(rng), normal(rng));
}

inline Matrix random_matrix(Eigen::Index n, std::mt19937& rng) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = random_complex(rng);
  return m;
}

inline Matrix random_unitary(Eigen::Index n, std::mt19937& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, rng));
  return qr.householderQ();
}

inline Vector random_state(Eigen::Index n, std::mt19937& rng) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = random_complex(rng);
  return v / v.norm();
}

// Random Hermitian matrix.
inline Matrix random_hermitian(Eigen::Index n, std::mt19937& rng) {
  const Matrix m = random_matrix(n, rng);
  return 0.5 * (m + adjoint(m));
}

// A single-factor space of the given dimension with labels l0, l1, ...
inline SpacePtr simple_space(Eigen::Index dim, const std::string& name = "A") {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < dim; ++i)
    labels.push_back("l" + std::to_string(i));
  return std::make_shared<CompositeSpace>(
      std::vector<Factor>{Factor{name, dim, labels}});
}

// Random context at `time`: the columns of a random unitary grouped into
// `parts` blocks, validated numerically.
inline ContextPtr random_context(const std::string& name,
                                 const std::string& time, Eigen::Index dim,
                                 std::size_t parts, std::mt19937& rng) {
  const Matrix u = random_unitary(dim, rng);
  std::vector<std::string> names;
  std::vector<Matrix> projectors;
  const Eigen::Index per = dim / static_cast<Eigen::Index>(parts);
  Eigen::Index col = 0;
  for (std::size_t k = 0; k < parts; ++k) {
    const Eigen::Index width =
        (k + 1 == parts) ? dim - col : per;
    std::vector<Vector> states;
    for (Eigen::Index j = 0; j < width; ++j) states.push_back(u.col(col++));
    names.push_back("p" + std::to_string(k));
    projectors.push_back(projector_from_states(states));
  }
  return std::make_shared<Context>(Context::checked(
      name, time, std::move(names), std::move(projectors)));
}

// A single-factor model with random full-space step unitaries on the grid
// t0..t<steps>.
struct RandomModel {
  SpacePtr space;
  std::shared_ptr<UnitarySchedule> schedule;
  Vector psi0;
};

inline RandomModel random_model(Eigen::Index dim, std::size_t steps,
                                std::mt19937& rng) {
  RandomModel m;
  m.space = simple_space(dim);
  std::vector<std::string> times;
  for (std::size_t i = 0; i <= steps; ++i)
    times.push_back("t" + std::to_string(i));
  m.schedule = std::make_shared<UnitarySchedule>(m.space, TimeGrid(times));
  for (std::size_t i = 0; i < steps; ++i)
    m.schedule->add_step_unitary(times[i], times[i + 1], {"A"},
                                 random_unitary(dim, rng));
  m.psi0 = random_state(dim, rng);
  return m;
}

// Literal trace-form decoherence entry, Tr[C+(alpha) rho0 C(beta)], computed
// with explicit chain matrices. Independent of the vector path used by
// FamilyAnalysis.
inline Complex trace_form_entry(const Family& family, Eigen::Index alpha,
                                Eigen::Index beta,
                                const UnitarySchedule& schedule,
                                const Matrix& rho0) {
  const Matrix ca = chain_operator(family, alpha, schedule);
  const Matrix cb = chain_operator(family, beta, schedule);
  return (ca.adjoint() * rho0 * cb).trace();
}

}  // namespace histq::testing
