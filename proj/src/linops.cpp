#include "histq/linops.hpp"

#include <string>

namespace histq {

namespace {

void check_orthonormal(const std::vector<Vector>& states, double tol,
                       const char* what) {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (std::abs(states[i].norm() - 1.0) > tol)
      throw NonIsometricPairs(std::string(what) + ": state " +
                              std::to_string(i) + " is not normalized");
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (std::abs(states[i].dot(states[j])) > tol)
        throw NonIsometricPairs(std::string(what) + ": states " +
                                std::to_string(i) + " and " +
                                std::to_string(j) + " are not orthogonal");
    }
  }
}

// Two-pass modified Gram-Schmidt projection of v against an orthonormal set.
Vector project_out(Vector v, const std::vector<Vector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& b : basis) v -= b.dot(v) * b;
  return v;
}

}  // namespace

Matrix projector_from_states(const std::vector<Vector>& states, double tol) {
  if (states.empty())
    throw DimensionMismatch("projector_from_states: empty state list");
  const Eigen::Index dim = states.front().size();
  for (const Vector& s : states)
    if (s.size() != dim)
      throw DimensionMismatch("projector_from_states: mixed dimensions");
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i; j < states.size(); ++j) {
      const Complex g = states[i].dot(states[j]);
      const Complex expect = (i == j) ? Complex(1, 0) : Complex(0, 0);
      if (std::abs(g - expect) > tol)
        throw NonOrthonormalInput(
            "projector_from_states: Gram matrix deviates from identity at (" +
            std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  Matrix p = Matrix::Zero(dim, dim);
  for (const Vector& s : states) p.noalias() += s * s.adjoint();
  return p;
}

std::vector<Vector> complete_orthonormal_basis(
    std::vector<Vector> seed, const std::vector<Vector>& candidates,
    Eigen::Index dim) {
  for (const Vector& c : candidates) {
    if (static_cast<Eigen::Index>(seed.size()) == dim) break;
    Vector r = project_out(c, seed);
    const double n = r.norm();
    if (n < completion_residual_cutoff) continue;
    seed.push_back(r / n);
  }
  if (static_cast<Eigen::Index>(seed.size()) != dim)
    throw InvariantViolation(
        "complete_orthonormal_basis: candidates do not span the complement");
  return seed;
}

Matrix complete_partial_isometry(const std::vector<IsometryPair>& pairs,
                                 Eigen::Index dim) {
  std::vector<Vector> canonical(dim);
  for (Eigen::Index i = 0; i < dim; ++i) canonical[i] = Vector::Unit(dim, i);
  return complete_partial_isometry(pairs, dim, canonical, canonical);
}

Matrix complete_partial_isometry(const std::vector<IsometryPair>& pairs,
                                 Eigen::Index dim,
                                 const std::vector<Vector>& input_candidates,
                                 const std::vector<Vector>& output_candidates) {
  std::vector<Vector> inputs, outputs;
  inputs.reserve(pairs.size());
  outputs.reserve(pairs.size());
  for (const IsometryPair& p : pairs) {
    if (p.input.size() != dim || p.output.size() != dim)
      throw DimensionMismatch("complete_partial_isometry: pair dimension " +
                              std::to_string(p.input.size()) + "x" +
                              std::to_string(p.output.size()) +
                              " does not match dim " + std::to_string(dim));
    inputs.push_back(p.input);
    outputs.push_back(p.output);
  }
  check_orthonormal(inputs, tol_orth, "inputs");
  check_orthonormal(outputs, tol_orth, "outputs");

  Matrix u = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    u.noalias() += outputs[k] * inputs[k].adjoint();

  const std::vector<Vector> in_basis =
      complete_orthonormal_basis(inputs, input_candidates, dim);
  const std::vector<Vector> out_basis =
      complete_orthonormal_basis(outputs, output_candidates, dim);
  for (std::size_t k = pairs.size(); k < in_basis.size(); ++k)
    u.noalias() += out_basis[k] * in_basis[k].adjoint();
  return u;
}

}  // namespace histq
