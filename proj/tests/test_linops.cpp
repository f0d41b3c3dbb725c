#include <doctest.h>

#include "support.hpp"

using namespace histq;
using namespace histq::testing;

namespace {

// Matrix entries that multiply exactly in double precision.
Matrix dyadic_matrix(Eigen::Index n, std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(-8, 8);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = Complex(pick(rng) / 4.0, pick(rng) / 4.0);
  return m;
}

}  // namespace

TEST_CASE("kron: identities and basis bookkeeping") {
  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix i3 = Matrix::Identity(3, 3);
  CHECK(max_abs(Matrix(kron(i2, i3) - Matrix::Identity(6, 6))) == 0.0);

  // |0> (x) |1> lands on index 1 of the dim-4 space.
  const Vector v = kron(Vector(Vector::Unit(2, 0)), Vector(Vector::Unit(2, 1)));
  REQUIRE(v.size() == 4);
  CHECK(v(1) == Complex(1, 0));
  CHECK(v.norm() == doctest::Approx(1.0));
}

TEST_CASE("kron: projector product acts as expected on a product state") {
  const Vector e_h = Vector::Unit(2, 0);
  const Vector e_a0 = Vector::Unit(3, 0);
  const Matrix p = kron(Matrix(e_h * e_h.adjoint()), Matrix(e_a0 * e_a0.adjoint()));
  const Vector v = kron(e_h, e_a0);
  CHECK(max_abs(Vector(p * v - v)) <= 1e-15);
  // and it kills the orthogonal pattern
  const Vector w = kron(Vector(Vector::Unit(2, 1)), e_a0);
  CHECK(max_abs(Vector(p * w)) == 0.0);
}

TEST_CASE("kron: associative with exact equality") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = dyadic_matrix(2, rng);
    const Matrix b = dyadic_matrix(3, rng);
    const Matrix c = dyadic_matrix(2, rng);
    CHECK(max_abs(Matrix(kron(kron(a, b), c) - kron(a, kron(b, c)))) == 0.0);
  }
}

TEST_CASE("adjoint: involution and tensor compatibility") {
  std::mt19937 rng(11);
  const Matrix a = random_matrix(3, rng);
  const Matrix b = random_matrix(2, rng);
  CHECK(max_abs(Matrix(adjoint(adjoint(a)) - a)) == 0.0);
  CHECK(max_abs(Matrix(adjoint(kron(a, b)) - kron(adjoint(a), adjoint(b)))) ==
        0.0);
  CHECK(max_abs(Matrix(adjoint(Matrix::Identity(4, 4)) -
                       Matrix::Identity(4, 4))) == 0.0);
}

TEST_CASE("trace: identity, pure states, errors") {
  CHECK(trace(Matrix(Matrix::Identity(5, 5))) == Complex(5, 0));
  std::mt19937 rng(13);
  const Vector psi = random_state(6, rng);
  CHECK(std::abs(trace(Matrix(psi * psi.adjoint())) - Complex(1, 0)) <= 1e-12);
  CHECK_THROWS_AS(trace(Matrix(Matrix::Zero(2, 3))), DimensionMismatch);
}

TEST_CASE("projector_from_states: basics") {
  const Vector e0 = Vector::Unit(2, 0);
  CHECK(max_abs(Matrix(projector_from_states({e0}) - e0 * e0.adjoint())) == 0.0);

  std::vector<Vector> basis;
  for (int i = 0; i < 4; ++i) basis.push_back(Vector::Unit(4, i));
  CHECK(max_abs(Matrix(projector_from_states(basis) - Matrix::Identity(4, 4))) ==
        0.0);
}

TEST_CASE("projector_from_states: idempotent, Hermitian, right rank") {
  std::mt19937 rng(17);
  const Matrix u = random_unitary(6, rng);
  std::vector<Vector> states{u.col(0), u.col(1), u.col(2)};
  const Matrix p = projector_from_states(states);
  CHECK(max_abs(Matrix(p * p - p)) <= 1e-12);
  CHECK(max_abs(Matrix(p - p.adjoint())) <= 1e-12);

  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  int rank = 0;
  for (Eigen::Index i = 0; i < 6; ++i)
    if (es.eigenvalues()(i) > 0.5) ++rank;
  CHECK(rank == 3);
}

TEST_CASE("projector_from_states: ok_X pattern has rank 1 in dim 6") {
  const Vector H = kron(Vector(Vector::Unit(2, 0)), Vector(Vector::Unit(3, 1)));
  const Vector T = kron(Vector(Vector::Unit(2, 1)), Vector(Vector::Unit(3, 2)));
  const Vector okx = std::sqrt(0.5) * H - std::sqrt(0.5) * T;
  const Matrix p = projector_from_states({okx});
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  int rank = 0;
  for (Eigen::Index i = 0; i < 6; ++i)
    if (es.eigenvalues()(i) > 0.5) ++rank;
  CHECK(rank == 1);
}

TEST_CASE("projector_from_states: rejects bad input") {
  const Vector e0 = Vector::Unit(2, 0);
  const Vector skew = (Vector(2) << 0.8, 0.6).finished();
  CHECK_THROWS_AS(projector_from_states({e0, skew}), NonOrthonormalInput);
  CHECK_THROWS_AS(projector_from_states({Vector(e0 * 2.0)}),
                  NonOrthonormalInput);
  CHECK_THROWS_AS(projector_from_states({}), DimensionMismatch);
  CHECK_THROWS_AS(projector_from_states({e0, Vector::Unit(3, 0)}),
                  DimensionMismatch);
}

TEST_CASE("complete_partial_isometry: identity pairs give the identity") {
  std::vector<IsometryPair> pairs{{Vector::Unit(2, 0), Vector::Unit(2, 0)},
                                  {Vector::Unit(2, 1), Vector::Unit(2, 1)}};
  CHECK(max_abs(Matrix(complete_partial_isometry(pairs, 2) -
                       Matrix::Identity(2, 2))) == 0.0);
  // no pairs at all: the canonical completion is the identity
  CHECK(max_abs(Matrix(complete_partial_isometry({}, 3) -
                       Matrix::Identity(3, 3))) == 0.0);
}

TEST_CASE("complete_partial_isometry: coin measurement unitary") {
  // U(|h,a0>) = |h,a_h>, U(|t,a0>) = |t,a_t> on the dim-6 coin+instrument
  // product, completed to a unitary.
  auto ket = [](int c, int a) {
    return Vector(kron(Vector(Vector::Unit(2, c)), Vector(Vector::Unit(3, a))));
  };
  std::vector<IsometryPair> pairs{{ket(0, 0), ket(0, 1)},
                                  {ket(1, 0), ket(1, 2)}};
  const Matrix u = complete_partial_isometry(pairs, 6);
  CHECK(max_abs(Vector(u * ket(0, 0) - ket(0, 1))) <= 1e-12);
  CHECK(max_abs(Vector(u * ket(1, 0) - ket(1, 2))) <= 1e-12);
  Matrix g = u.adjoint() * u;
  g.diagonal().array() -= Complex(1, 0);
  CHECK(max_abs(g) <= 1e-12);
}

TEST_CASE("complete_partial_isometry: property over random pairs") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = 3 + (trial % 5);
    const Eigen::Index k = 1 + (trial % dim);
    const Matrix uin = random_unitary(dim, rng);
    const Matrix uout = random_unitary(dim, rng);
    std::vector<IsometryPair> pairs;
    for (Eigen::Index j = 0; j < k; ++j)
      pairs.push_back(IsometryPair{uin.col(j), uout.col(j)});
    const Matrix u = complete_partial_isometry(pairs, dim);
    Matrix g = u.adjoint() * u;
    g.diagonal().array() -= Complex(1, 0);
    CHECK(max_abs(g) <= 1e-12);
    for (const IsometryPair& p : pairs)
      CHECK(max_abs(Vector(u * p.input - p.output)) <= 1e-12);
  }
}

TEST_CASE("complete_partial_isometry: random complement candidates") {
  std::mt19937 rng(29);
  const Eigen::Index dim = 6;
  const Matrix uin = random_unitary(dim, rng);
  std::vector<IsometryPair> pairs{{uin.col(0), uin.col(1)}};
  std::vector<Vector> cand_in, cand_out;
  for (Eigen::Index j = 0; j < dim; ++j) {
    cand_in.push_back(random_state(dim, rng));
    cand_out.push_back(random_state(dim, rng));
  }
  const Matrix u = complete_partial_isometry(pairs, dim, cand_in, cand_out);
  Matrix g = u.adjoint() * u;
  g.diagonal().array() -= Complex(1, 0);
  CHECK(max_abs(g) <= 1e-12);
  CHECK(max_abs(Vector(u * pairs[0].input - pairs[0].output)) <= 1e-12);
}

TEST_CASE("complete_partial_isometry: rejects bad pairs") {
  const Vector e0 = Vector::Unit(2, 0);
  const Vector mix = (Vector(2) << std::sqrt(0.5), std::sqrt(0.5)).finished();
  CHECK_THROWS_AS(
      complete_partial_isometry({{e0, e0}, {mix, Vector::Unit(2, 1)}}, 2),
      NonIsometricPairs);
  CHECK_THROWS_AS(complete_partial_isometry({{Vector(e0 * 0.5), e0}}, 2),
                  NonIsometricPairs);
  CHECK_THROWS_AS(complete_partial_isometry({{e0, Vector::Unit(3, 0)}}, 2),
                  DimensionMismatch);
}

TEST_CASE("is_unitary") {
  std::mt19937 rng(31);
  CHECK(is_unitary(random_unitary(5, rng)));
  CHECK_FALSE(is_unitary(Matrix(2.0 * Matrix::Identity(3, 3))));
}
