#include <doctest.h>

#include "support.hpp"

using namespace histq;
using namespace histq::testing;

namespace {

SpacePtr ab_space() {
  return std::make_shared<CompositeSpace>(std::vector<Factor>{
      Factor{"A", 2, {"a0", "a1"}}, Factor{"B", 3, {"b0", "b1", "b2"}}});
}

SpacePtr abc_space() {
  return std::make_shared<CompositeSpace>(std::vector<Factor>{
      Factor{"A", 2, {"x0", "x1"}}, Factor{"B", 2, {"y0", "y1"}},
      Factor{"C", 2, {"z0", "z1"}}});
}

}  // namespace

TEST_CASE("CompositeSpace: dims, strides, validation") {
  auto s = ab_space();
  CHECK(s->total_dim() == 6);
  CHECK(s->stride(0) == 3);
  CHECK(s->stride(1) == 1);
  CHECK(s->factor_position("B") == 1);
  CHECK_THROWS_AS(s->factor_position("Z"), UnknownFactor);

  CHECK_THROWS_AS(CompositeSpace(std::vector<Factor>{
                      Factor{"A", 2, {"a", "a"}}}),
                  InvariantViolation);
  CHECK_THROWS_AS(CompositeSpace(std::vector<Factor>{
                      Factor{"A", 2, {"a", "b"}}, Factor{"A", 2, {"c", "d"}}}),
                  InvariantViolation);
  CHECK_THROWS_AS(CompositeSpace(std::vector<Factor>{Factor{"A", 3, {"a"}}}),
                  InvariantViolation);
}

TEST_CASE("basis_state: addressing and orthonormality") {
  auto s = ab_space();
  const Vector v = basis_state(*s, {"a0", "b0"});
  CHECK(v(0) == Complex(1, 0));
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK(basis_state(*s, {"a1", "b2"})(5) == Complex(1, 0));

  // the six basis states form an orthonormal set
  std::vector<Vector> all;
  for (const char* a : {"a0", "a1"})
    for (const char* b : {"b0", "b1", "b2"})
      all.push_back(basis_state(*s, {a, b}));
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j)
      CHECK(std::abs(inner(all[i], all[j]) -
                     (i == j ? Complex(1, 0) : Complex(0, 0))) == 0.0);

  CHECK_THROWS_AS(basis_state(*s, {"a0"}), WrongArity);
  CHECK_THROWS_AS(basis_state(*s, {"a0", "nope"}), UnknownLabel);
}

TEST_CASE("find_label: global lookup and ambiguity") {
  auto s = ab_space();
  auto hit = s->find_label("b1");
  REQUIRE(hit.has_value());
  CHECK(hit->position == 1);
  CHECK(hit->index == 1);
  CHECK_FALSE(s->find_label("nope").has_value());

  CompositeSpace clash(std::vector<Factor>{Factor{"A", 2, {"z", "w"}},
                                           Factor{"B", 2, {"z", "v"}}});
  CHECK_THROWS_AS(clash.find_label("z"), InvariantViolation);
}

TEST_CASE("superpose and inner") {
  auto s = ab_space();
  const Vector u = basis_state(*s, {"a0", "b0"});
  const Vector v = basis_state(*s, {"a1", "b1"});
  const Vector w = superpose({{std::sqrt(1.0 / 3.0), u},
                              {std::sqrt(2.0 / 3.0), v}});
  CHECK(w.norm() == doctest::Approx(1.0));

  CHECK(superpose({}).size() == 0);
  CHECK_THROWS_AS(superpose({{1.0, u}, {1.0, Vector::Unit(3, 0)}}),
                  SpaceMismatch);

  // conjugate-linear in the first argument
  std::mt19937 rng(5);
  const Vector x = random_state(6, rng), y = random_state(6, rng);
  const Complex c(0.3, -0.8);
  CHECK(std::abs(inner(Vector(c * x), y) - std::conj(c) * inner(x, y)) <=
        1e-14);
  CHECK(inner(x, x).real() == doctest::Approx(1.0));
  CHECK(std::abs(inner(x, x).imag()) <= 1e-15);
  CHECK_THROWS_AS(inner(x, Vector::Unit(3, 0)), SpaceMismatch);
}

TEST_CASE("lift: identity and contiguous factors against kron oracle") {
  auto s = ab_space();
  CHECK(max_abs(Matrix(lift(Matrix::Identity(2, 2), *s, {"A"}) -
                       Matrix::Identity(6, 6))) == 0.0);

  std::mt19937 rng(7);
  const Matrix op_a = random_matrix(2, rng);
  const Matrix op_b = random_matrix(3, rng);
  CHECK(max_abs(Matrix(lift(op_a, *s, {"A"}) -
                       kron(op_a, Matrix(Matrix::Identity(3, 3))))) == 0.0);
  CHECK(max_abs(Matrix(lift(op_b, *s, {"B"}) -
                       kron(Matrix(Matrix::Identity(2, 2)), op_b))) == 0.0);
}

TEST_CASE("lift: non-contiguous factors against permutation oracle") {
  auto s = abc_space();
  std::mt19937 rng(11);
  const Matrix op = random_matrix(4, rng);  // acts on A (x) C

  // permutation |a,b,c> -> |a,c,b| mapping the lifted operator onto
  // (op (x) I_B) in the (A,C,B) ordering
  Matrix perm = Matrix::Zero(8, 8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) perm(((a * 2 + c) * 2) + b, (a * 2 + b) * 2 + c) = 1;
  const Matrix expected =
      perm.adjoint() * kron(op, Matrix(Matrix::Identity(2, 2))) * perm;
  CHECK(max_abs(Matrix(lift(op, *s, {"A", "C"}) - expected)) <= 1e-15);

  // order of the name list is irrelevant
  CHECK(max_abs(Matrix(lift(op, *s, {"C", "A"}) - lift(op, *s, {"A", "C"}))) ==
        0.0);
}

TEST_CASE("lift: preserves Hermiticity, idempotence, unitarity") {
  auto s = abc_space();
  std::mt19937 rng(13);

  const Matrix h = random_hermitian(2, rng);
  const Matrix lh = lift(h, *s, {"B"});
  CHECK(max_abs(Matrix(lh - lh.adjoint())) <= 1e-15);

  const Matrix u = random_unitary(2, rng);
  const Matrix lu = lift(u, *s, {"B"});
  Matrix g = lu.adjoint() * lu;
  g.diagonal().array() -= Complex(1, 0);
  CHECK(max_abs(g) <= 1e-14);

  const Vector st = random_state(2, rng);
  const Matrix p = st * st.adjoint();
  const Matrix lp = lift(p, *s, {"C"});
  CHECK(max_abs(Matrix(lp * lp - lp)) <= 1e-14);
}

TEST_CASE("lift: operators on disjoint factors commute") {
  auto s = abc_space();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = lift(random_hermitian(2, rng), *s, {"A"});
    const Matrix b = lift(random_hermitian(2, rng), *s, {"C"});
    CHECK(max_abs(Matrix(a * b - b * a)) <= 1e-12);
  }
}

TEST_CASE("lift: pointer projector rank by enumeration oracle") {
  auto s = abc_space();
  Matrix local = Matrix::Zero(2, 2);
  local(1, 1) = 1;  // |y1><y1|
  const Matrix lifted = lift(local, *s, {"B"});

  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < s->total_dim(); ++i)
    if (s->digits_of(i)[1] == 1) ++count;
  CHECK(count == 4);
  CHECK(std::abs(trace(lifted) - Complex(static_cast<double>(count), 0)) <=
        1e-12);
}

TEST_CASE("lift: errors") {
  auto s = ab_space();
  CHECK_THROWS_AS(lift(Matrix::Identity(2, 2), *s, {"Z"}), UnknownFactor);
  CHECK_THROWS_AS(lift(Matrix::Identity(4, 4), *s, {"A"}), DimensionMismatch);
  CHECK_THROWS_AS(lift(Matrix::Identity(4, 4), *s, {"A", "A"}),
                  DimensionMismatch);
  CHECK_THROWS_AS(lift(Matrix(Matrix::Zero(2, 3)), *s, {"A"}),
                  DimensionMismatch);
}
