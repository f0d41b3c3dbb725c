#include "histq/dynamics.hpp"

#include <set>

#include "histq/indexing.hpp"

namespace histq {

TimeGrid::TimeGrid(std::vector<std::string> times) : times_(std::move(times)) {
  std::set<std::string> seen;
  for (const std::string& t : times_)
    if (!seen.insert(t).second)
      throw InvariantViolation("duplicate time label " + t);
}

std::size_t TimeGrid::index_of(const std::string& time) const {
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (times_[i] == time) return i;
  throw UnknownTime("unknown time " + time);
}

bool TimeGrid::contains(const std::string& time) const {
  for (const std::string& t : times_)
    if (t == time) return true;
  return false;
}

UnitarySchedule::UnitarySchedule(SpacePtr space, TimeGrid grid)
    : space_(std::move(space)), grid_(std::move(grid)) {
  if (!space_) throw InvariantViolation("schedule needs a composite space");
  if (grid_.size() == 0) throw InvariantViolation("schedule needs a time grid");
  steps_.resize(grid_.size() - 1);
}

std::size_t UnitarySchedule::step_index(const std::string& from,
                                        const std::string& to) const {
  const std::size_t i = grid_.index_of(from);
  const std::size_t j = grid_.index_of(to);
  if (j != i + 1)
    throw InvariantViolation("interval " + from + " -> " + to +
                             " is not a grid step");
  return i;
}

void UnitarySchedule::add_step(const std::string& from, const std::string& to,
                               const std::vector<std::string>& on_factors,
                               const std::vector<IsometryPair>& local_pairs) {
  const std::size_t i = step_index(from, to);
  if (steps_[i])
    throw DuplicateStep("interval " + from + " -> " + to +
                        " already has a unitary");
  Eigen::Index dloc = 1;
  for (const std::string& f : on_factors)
    dloc *= space_->factor(space_->factor_position(f)).dim;
  const Matrix local = complete_partial_isometry(local_pairs, dloc);
  steps_[i] = lift(local, *space_, on_factors);
}

void UnitarySchedule::add_step_unitary(const std::string& from,
                                       const std::string& to,
                                       const std::vector<std::string>& on_factors,
                                       const Matrix& local_unitary) {
  const std::size_t i = step_index(from, to);
  if (steps_[i])
    throw DuplicateStep("interval " + from + " -> " + to +
                        " already has a unitary");
  if (!is_unitary(local_unitary, 1e-10))
    throw NonUnitaryStep("interval " + from + " -> " + to +
                         ": matrix is not unitary");
  steps_[i] = lift(local_unitary, *space_, on_factors);
}

const Matrix* UnitarySchedule::step(std::size_t interval) const {
  if (interval >= steps_.size()) throw UnknownTime("interval out of range");
  return steps_[interval] ? &*steps_[interval] : nullptr;
}

Matrix UnitarySchedule::propagator(const std::string& from,
                                   const std::string& to) const {
  const std::size_t i = grid_.index_of(from);
  const std::size_t j = grid_.index_of(to);
  const Eigen::Index n = space_->total_dim();
  if (j < i) return propagator(to, from).adjoint();
  Matrix p = Matrix::Identity(n, n);
  for (std::size_t k = i; k < j; ++k)
    if (steps_[k]) p = *steps_[k] * p;
  return p;
}

Vector UnitarySchedule::evolve(Vector state, const std::string& from,
                               const std::string& to) const {
  if (state.size() != space_->total_dim())
    throw SpaceMismatch("evolve: state dimension does not match space");
  const std::size_t i = grid_.index_of(from);
  const std::size_t j = grid_.index_of(to);
  if (i <= j) {
    for (std::size_t k = i; k < j; ++k)
      if (steps_[k]) state = *steps_[k] * state;
  } else {
    for (std::size_t k = i; k-- > j;)
      if (steps_[k]) state = steps_[k]->adjoint() * state;
  }
  return state;
}

}  // namespace histq
