#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <vector>

#include "histq/errors.hpp"

// Dense complex linear algebra used by the whole engine: Kronecker products,
// adjoints, traces, projector builders and the deterministic completion of
// partial isometries to unitaries. Everything is plain Eigen; the free
// functions are templated on the scalar so they work for real test data too.

namespace histq {

using Complex = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<Complex>;
using Vector = DenseVector<Complex>;

// Engine-wide tolerances. 324-dim double arithmetic leaves several orders of
// magnitude of headroom over all of these.
inline constexpr double tol_orth = 1e-10;
inline constexpr double tol_norm = 1e-10;
inline constexpr double tol_eq = 1e-10;
// Canonical-basis candidates with a residual below this are skipped when
// completing an orthonormal set (they are already inside the span).
inline constexpr double completion_residual_cutoff = 1e-9;

// Largest absolute entry; zero for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

// Kronecker product with the leftmost factor most significant:
// (a (x) b)[i_a * rows(b) + i_b, j_a * cols(b) + j_b] = a(i_a, j_a) * b(i_b, j_b).
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  constexpr bool both_vectors = DerivedA::ColsAtCompileTime == 1 &&
                                DerivedB::ColsAtCompileTime == 1;
  if constexpr (both_vectors) {
    DenseVector<Scalar> out = Eigen::kroneckerProduct(a.derived(), b.derived());
    return out;
  } else {
    DenseMatrix<Scalar> out = Eigen::kroneckerProduct(a.derived(), b.derived());
    return out;
  }
}

// Conjugate transpose, evaluated so the result can outlive its arguments.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> adjoint(
    const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint();
}

template <typename Derived>
typename Derived::Scalar trace(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("trace: matrix is not square");
  return m.trace();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = tol_eq) {
  if (m.rows() != m.cols()) return false;
  DenseMatrix<typename Derived::Scalar> g = m.adjoint() * m;
  g.diagonal().array() -= typename Derived::Scalar(1);
  return max_abs(g) <= tol;
}

// A named input/output pair of a partial isometry, e.g. one defining row of
// an instrument's measurement unitary.
struct IsometryPair {
  Vector input;
  Vector output;
};

// Sum of |v><v| over pairwise orthonormal states.
// Throws NonOrthonormalInput if the Gram matrix deviates from the identity.
Matrix projector_from_states(const std::vector<Vector>& states,
                             double tol = tol_orth);

// Extends `seed` (assumed orthonormal) to an orthonormal basis of C^dim by
// Gram-Schmidt over `candidates` in order, skipping candidates whose residual
// is below completion_residual_cutoff.
std::vector<Vector> complete_orthonormal_basis(std::vector<Vector> seed,
                                               const std::vector<Vector>& candidates,
                                               Eigen::Index dim);

// Unitary U with U * pairs[k].input = pairs[k].output for every k. The
// completion maps a deterministic orthonormal basis of the input complement
// onto one of the output complement, both produced by Gram-Schmidt over the
// canonical basis in index order, so identical pair lists always produce
// identical matrices.
Matrix complete_partial_isometry(const std::vector<IsometryPair>& pairs,
                                 Eigen::Index dim);

// Same, but drawing complement candidates from the given lists instead of the
// canonical basis. Any spanning candidate set yields a valid unitary; query
// results must not depend on the choice.
Matrix complete_partial_isometry(const std::vector<IsometryPair>& pairs,
                                 Eigen::Index dim,
                                 const std::vector<Vector>& input_candidates,
                                 const std::vector<Vector>& output_candidates);

}  // namespace histq
