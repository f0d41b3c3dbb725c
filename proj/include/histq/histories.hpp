#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "histq/dynamics.hpp"

// Consistent-histories core: contexts (resolutions of the identity), families
// of histories over a time subset of the grid, chain operators, the
// decoherence functional, and probability queries gated on the consistency
// condition. Probabilities are assigned only when every off-diagonal entry of
// the decoherence functional vanishes within tolerance; otherwise the query
// raises InconsistentFamily carrying the worst interference witness.

namespace histq {

inline constexpr double consistency_tol_default = 1e-10;

// A resolution of the identity at one grid time: named, mutually orthogonal
// full-space projectors summing to I.
class Context {
public:
  // Full numeric validation: each projector Hermitian and idempotent, all
  // mutually orthogonal, sum equal to the identity (within tol).
  static Context checked(std::string name, std::string time,
                         std::vector<std::string> projector_names,
                         std::vector<Matrix> projectors,
                         double tol = consistency_tol_default);

  // Structural construction from pointer labels of a single factor, each
  // entry lifting |label><label|, plus an optional complement projector
  // I - sum covering the remaining degrees of freedom. Orthogonality and the
  // completeness of the resolution hold by construction; without a complement
  // entry the labels must exhaust the factor basis.
  struct PointerEntry {
    std::string projector_name;
    std::string factor;
    std::string label;
  };
  static Context from_pointer_labels(const SpacePtr& space, std::string name,
                                     std::string time,
                                     const std::vector<PointerEntry>& entries,
                                     const std::optional<std::string>& rest_name);

  const std::string& name() const { return name_; }
  const std::string& time() const { return time_; }
  std::size_t size() const { return projector_names_.size(); }
  const std::string& projector_name(std::size_t k) const {
    return projector_names_[k];
  }
  const Matrix& projector(std::size_t k) const { return projectors_[k]; }
  // Index of a projector by name; UnknownIndex if absent.
  std::size_t index_of(const std::string& projector_name) const;

private:
  Context() = default;
  std::string name_;
  std::string time_;
  std::vector<std::string> projector_names_;
  std::vector<Matrix> projectors_;
};

using ContextPtr = std::shared_ptr<const Context>;

// A time-ordered list of contexts. Atomic histories are one projector choice
// per context; the atomic grid is indexed in row-major order with the first
// context most significant. Times absent from the family are simply not
// projected at.
class Family {
public:
  static std::shared_ptr<const Family> create(std::string name,
                                              std::vector<ContextPtr> contexts,
                                              const TimeGrid& grid);

  const std::string& name() const { return name_; }
  std::size_t context_count() const { return contexts_.size(); }
  const Context& context(std::size_t i) const { return *contexts_[i]; }
  const ContextPtr& context_ptr(std::size_t i) const { return contexts_[i]; }
  Eigen::Index dim() const { return dim_; }

  // Size of the atomic grid (product of the context sizes).
  Eigen::Index atomic_count() const { return atomic_count_; }
  std::vector<Eigen::Index> atomic_digits(Eigen::Index flat) const;
  Eigen::Index atomic_flat(const std::vector<Eigen::Index>& digits) const;
  // Projector names along one atomic history, one per context.
  std::vector<std::string> atomic_names(Eigen::Index flat) const;

private:
  Family() = default;
  std::string name_;
  std::vector<ContextPtr> contexts_;
  std::vector<Eigen::Index> radices_;
  Eigen::Index atomic_count_ = 1;
  Eigen::Index dim_ = 0;
};

using FamilyPtr = std::shared_ptr<const Family>;

// A history is a disjunction of atomic histories: a subset of the atomic
// grid, kept as a membership mask.
struct History {
  FamilyPtr family;
  std::vector<bool> lambda;

  static History none(FamilyPtr family);
  static History all(FamilyPtr family);
  // Cylinder set fixing the projector at one family time.
  static History event(FamilyPtr family, const std::string& time,
                       const std::string& projector_name);
};

History history_and(const History& a, const History& b);
History history_or(const History& a, const History& b);
History history_not(const History& a);

struct OffdiagWitness {
  Eigen::Index alpha = 0;
  Eigen::Index beta = 0;
  double magnitude = 0.0;
};

// Full decoherence functional D(alpha, beta) = Tr[C+(alpha) rho0 C(beta)]
// over the atomic grid, with the consistency verdict and the worst
// off-diagonal witness (first in row-major scan order among the maxima, so
// reports are deterministic).
struct DecoherenceReport {
  Eigen::MatrixXcd matrix;
  bool consistent = true;
  std::optional<OffdiagWitness> worst;
  double tol = consistency_tol_default;
};

// Chain operator of one atomic history as an explicit matrix:
// C = U(t0,t1) P1 U(t1,t2) ... Pn U(tn,t0), where U(a,b) maps states at b to
// states at a. Intended for small spaces and cross-checks; query evaluation
// uses the vector path below.
Matrix chain_operator(const Family& family, Eigen::Index atomic,
                      const UnitarySchedule& schedule);

// C+(alpha) |psi0>: forward-evolve, project at each family time, then pull
// back to t0.
Vector chain_adjoint_state(const Family& family, Eigen::Index atomic,
                           const UnitarySchedule& schedule, const Vector& psi0);

// Precomputed analysis of one family for one initial state: all chain
// vectors, the decoherence functional, and gated probability queries.
// Immutable after construction and safe to share across threads.
class FamilyAnalysis {
public:
  // Pure initial state (promoted internally to |psi0><psi0|).
  FamilyAnalysis(FamilyPtr family, const UnitarySchedule& schedule,
                 const Vector& psi0, double tol = consistency_tol_default);
  // General density operator; factorized through its spectral decomposition.
  FamilyAnalysis(FamilyPtr family, const UnitarySchedule& schedule,
                 const Matrix& rho0, double tol = consistency_tol_default);

  const FamilyPtr& family() const { return family_; }
  const DecoherenceReport& report() const { return report_; }
  std::vector<std::string> witness_alpha_names() const;
  std::vector<std::string> witness_beta_names() const;

  // Pr(history) = sum over lambda x lambda of D. Raises InconsistentFamily
  // unless the family passed the consistency check or `force` is set; the
  // result is clamped to [0,1] only within a 1e-12 slack.
  double probability(const History& history, bool force = false) const;

  // Pr(a | b) = Pr(a and b) / Pr(b); ConditionOnNull when Pr(b) <= 1e-12.
  double conditional(const History& a, const History& b) const;

private:
  void compute(const UnitarySchedule& schedule,
               const std::vector<std::pair<double, Vector>>& components);
  double lambda_sum(const std::vector<bool>& lambda) const;

  FamilyPtr family_;
  DecoherenceReport report_;
};

// One-shot conveniences over FamilyAnalysis.
DecoherenceReport decoherence_functional(const FamilyPtr& family,
                                         const Vector& psi0,
                                         const UnitarySchedule& schedule,
                                         double tol = consistency_tol_default);
DecoherenceReport decoherence_functional(const FamilyPtr& family,
                                         const Matrix& rho0,
                                         const UnitarySchedule& schedule,
                                         double tol = consistency_tol_default);
double probability(const History& history, const Vector& psi0,
                   const UnitarySchedule& schedule, bool force = false,
                   double tol = consistency_tol_default);
double conditional(const History& a, const History& b, const Vector& psi0,
                   const UnitarySchedule& schedule,
                   double tol = consistency_tol_default);

}  // namespace histq
