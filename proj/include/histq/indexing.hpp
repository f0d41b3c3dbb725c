#pragma once

#include <Eigen/Dense>

#include <vector>

// Mixed-radix index arithmetic shared by the composite-space code and the
// scenario builder. The convention everywhere is row-major: the leftmost
// digit is the most significant one.

namespace histq::indexing {

inline Eigen::Index total(const std::vector<Eigen::Index>& dims) {
  Eigen::Index n = 1;
  for (Eigen::Index d : dims) n *= d;
  return n;
}

inline Eigen::Index compose(const std::vector<Eigen::Index>& dims,
                            const std::vector<Eigen::Index>& digits) {
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

inline std::vector<Eigen::Index> decompose(Eigen::Index flat,
                                           const std::vector<Eigen::Index>& dims) {
  std::vector<Eigen::Index> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = flat % dims[k];
    flat /= dims[k];
  }
  return digits;
}

// For each flat index of the sub-lattice spanned by `sub_dims`, the
// contribution to a flat index of the full lattice when the sub-digits are
// placed at the given strides. Two tables built from complementary position
// sets let callers scan a product lattice as full = table_a[i] + table_b[j].
inline std::vector<Eigen::Index> contribution_table(
    const std::vector<Eigen::Index>& sub_dims,
    const std::vector<Eigen::Index>& sub_strides) {
  const Eigen::Index n = total(sub_dims);
  std::vector<Eigen::Index> table(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::vector<Eigen::Index> digits = decompose(i, sub_dims);
    Eigen::Index c = 0;
    for (std::size_t k = 0; k < digits.size(); ++k)
      c += digits[k] * sub_strides[k];
    table[static_cast<std::size_t>(i)] = c;
  }
  return table;
}

}  // namespace histq::indexing
