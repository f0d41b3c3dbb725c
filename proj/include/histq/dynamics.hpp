#pragma once

#include <optional>
#include <string>
#include <vector>

#include "histq/qspace.hpp"

// Piecewise unitary dynamics on an ordinal time grid. Each grid step carries
// one full-space unitary; propagators between arbitrary grid times are the
// chronological composition of the step unitaries (adjoint when running
// backwards). Times are labels only; no Hamiltonian or physical durations.
// Once its steps are registered a schedule is immutable and safe to share
// across threads.

namespace histq {

class TimeGrid {
public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<std::string> times);

  std::size_t size() const { return times_.size(); }
  const std::string& label(std::size_t i) const { return times_[i]; }
  const std::vector<std::string>& labels() const { return times_; }

  std::size_t index_of(const std::string& time) const;  // UnknownTime
  bool contains(const std::string& time) const;

private:
  std::vector<std::string> times_;
};

class UnitarySchedule {
public:
  UnitarySchedule(SpacePtr space, TimeGrid grid);

  const CompositeSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const TimeGrid& grid() const { return grid_; }

  // Completes the partial isometry on the product of the named factors, lifts
  // it to the full space and stores it as the step unitary for the interval
  // (from, to), which must be a single grid step. An empty pair list gives the
  // identity step.
  void add_step(const std::string& from, const std::string& to,
                const std::vector<std::string>& on_factors,
                const std::vector<IsometryPair>& local_pairs);

  // Stores a caller-supplied local unitary instead; NonUnitaryStep if it
  // fails ||U+U - I||_max <= 1e-10.
  void add_step_unitary(const std::string& from, const std::string& to,
                        const std::vector<std::string>& on_factors,
                        const Matrix& local_unitary);

  // Step unitary for grid interval i -> i+1; identity steps are represented
  // implicitly and returned as nullptr.
  const Matrix* step(std::size_t interval) const;

  // Full-space propagator mapping states at `from` to states at `to`.
  // Backwards propagators are adjoints of the forward ones; from == to gives
  // the identity.
  Matrix propagator(const std::string& from, const std::string& to) const;

  // Applies the propagator step by step (one matrix-vector product per grid
  // interval); norm is preserved to tolerance.
  Vector evolve(Vector state, const std::string& from,
                const std::string& to) const;

private:
  std::size_t step_index(const std::string& from, const std::string& to) const;

  SpacePtr space_;
  TimeGrid grid_;
  std::vector<std::optional<Matrix>> steps_;
};

}  // namespace histq
