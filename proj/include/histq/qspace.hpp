#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "histq/linops.hpp"

// Labeled tensor-product Hilbert spaces: a registry of named factors with
// named basis states, flat-index arithmetic over the product, and the lifting
// of local operators into the full space (identity on every other factor).
// Spaces are immutable after construction and freely shareable.

namespace histq {

// One finite-dimensional tensor factor, e.g. a qubit or an instrument with a
// ready state and a pointer state per outcome.
struct Factor {
  std::string name;
  Eigen::Index dim = 0;
  std::vector<std::string> basis_labels;
};

class CompositeSpace {
public:
  explicit CompositeSpace(std::vector<Factor> factors);

  Eigen::Index total_dim() const { return total_dim_; }
  std::size_t factor_count() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_[i]; }
  const std::vector<Factor>& factors() const { return factors_; }

  // Position of a factor in the fixed order; throws UnknownFactor.
  std::size_t factor_position(const std::string& name) const;

  // Stride of one factor digit in the flat index (leftmost factor is the
  // most significant).
  Eigen::Index stride(std::size_t position) const { return strides_[position]; }

  // Index of a basis label within its factor; throws UnknownLabel.
  Eigen::Index label_index(std::size_t position, const std::string& label) const;

  // Global label lookup used by the scenario language: a label may appear in
  // at most one factor to be addressable without qualification.
  struct LabelHit {
    std::size_t position;
    Eigen::Index index;
  };
  // Returns nothing if the label is unknown; throws InvariantViolation if it
  // is ambiguous across factors.
  std::optional<LabelHit> find_label(const std::string& label) const;

  Eigen::Index index_of(const std::vector<Eigen::Index>& digits) const;
  std::vector<Eigen::Index> digits_of(Eigen::Index flat) const;

  std::vector<Eigen::Index> dims() const;

private:
  std::vector<Factor> factors_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index total_dim_ = 1;
};

using SpacePtr = std::shared_ptr<const CompositeSpace>;

// Canonical product basis vector for one label per factor, in factor order.
Vector basis_state(const CompositeSpace& space,
                   const std::vector<std::string>& labels);

// Sum of coefficient * state. Not normalized; an empty list gives the empty
// vector. All states must share one dimension.
Vector superpose(const std::vector<std::pair<Complex, Vector>>& terms);

// <u|v>, conjugate-linear in the first argument.
Complex inner(const Vector& u, const Vector& v);

// Embeds a local operator acting on the named factors into the full space,
// identity on all remaining factors. The local operator's index order is the
// factors' order within the space, regardless of the order of `on_factors`;
// the named factors need not be contiguous.
Matrix lift(const Matrix& local, const CompositeSpace& space,
            const std::vector<std::string>& on_factors);

}  // namespace histq
