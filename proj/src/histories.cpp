#include "histq/histories.hpp"

#include <algorithm>
#include <cmath>

#include "histq/indexing.hpp"

namespace histq {

namespace {

constexpr double probability_clamp_slack = 1e-12;
constexpr double null_condition_cutoff = 1e-12;

double clamp_probability(double p) {
  if (p < 0.0 && p >= -probability_clamp_slack) return 0.0;
  if (p > 1.0 && p <= 1.0 + probability_clamp_slack) return 1.0;
  return p;
}

void require_same_family(const History& a, const History& b) {
  if (a.family != b.family)
    throw FamilyMismatch("histories belong to different families");
}

}  // namespace

Context Context::checked(std::string name, std::string time,
                         std::vector<std::string> projector_names,
                         std::vector<Matrix> projectors, double tol) {
  if (projector_names.size() != projectors.size() || projectors.empty())
    throw InvariantViolation("context " + name +
                             ": need one name per projector");
  const Eigen::Index dim = projectors.front().rows();
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const Matrix& p = projectors[k];
    if (p.rows() != dim || p.cols() != dim)
      throw DimensionMismatch("context " + name + ": projector " +
                              projector_names[k] + " has wrong shape");
    if (max_abs(Matrix(p - p.adjoint())) > tol)
      throw InvariantViolation("context " + name + ": projector " +
                               projector_names[k] + " is not Hermitian");
    if (max_abs(Matrix(p * p - p)) > tol)
      throw InvariantViolation("context " + name + ": projector " +
                               projector_names[k] + " is not idempotent");
  }
  for (std::size_t k = 0; k < projectors.size(); ++k)
    for (std::size_t l = k + 1; l < projectors.size(); ++l)
      if (max_abs(Matrix(projectors[k] * projectors[l])) > tol)
        throw InvariantViolation("context " + name + ": projectors " +
                                 projector_names[k] + " and " +
                                 projector_names[l] + " are not orthogonal");
  Matrix sum = Matrix::Zero(dim, dim);
  for (const Matrix& p : projectors) sum += p;
  sum.diagonal().array() -= Complex(1, 0);
  if (max_abs(sum) > tol)
    throw InvariantViolation("context " + name + " does not sum to identity");

  Context c;
  c.name_ = std::move(name);
  c.time_ = std::move(time);
  c.projector_names_ = std::move(projector_names);
  c.projectors_ = std::move(projectors);
  return c;
}

Context Context::from_pointer_labels(
    const SpacePtr& space, std::string name, std::string time,
    const std::vector<PointerEntry>& entries,
    const std::optional<std::string>& rest_name) {
  if (entries.empty())
    throw InvariantViolation("context " + name + ": no projectors");
  const std::string& factor_name = entries.front().factor;
  const std::size_t pos = space->factor_position(factor_name);
  const Eigen::Index fdim = space->factor(pos).dim;

  // Rank-1 pointer projectors on distinct factors can never be mutually
  // orthogonal, so a single shared factor is required for validity.
  std::vector<Eigen::Index> used;
  Matrix local_sum = Matrix::Zero(fdim, fdim);
  std::vector<std::string> names;
  std::vector<Matrix> lifted;
  for (const PointerEntry& e : entries) {
    if (e.factor != factor_name)
      throw InvariantViolation(
          "context " + name +
          ": pointer projectors on different factors are not orthogonal (" +
          factor_name + " vs " + e.factor + ")");
    const Eigen::Index li = space->label_index(pos, e.label);
    if (std::find(used.begin(), used.end(), li) != used.end())
      throw InvariantViolation("context " + name + ": label " + e.label +
                               " used twice");
    used.push_back(li);
    Matrix local = Matrix::Zero(fdim, fdim);
    local(li, li) = Complex(1, 0);
    local_sum += local;
    names.push_back(e.projector_name);
    lifted.push_back(lift(local, *space, {factor_name}));
  }

  if (rest_name) {
    Matrix rest = Matrix::Identity(space->total_dim(), space->total_dim());
    for (const Matrix& p : lifted) rest -= p;
    names.push_back(*rest_name);
    lifted.push_back(std::move(rest));
  } else {
    Matrix gap = Matrix::Identity(fdim, fdim) - local_sum;
    if (max_abs(gap) > tol_eq)
      throw InvariantViolation("context " + name +
                               " does not sum to identity (missing complement "
                               "projector)");
  }

  Context c;
  c.name_ = std::move(name);
  c.time_ = std::move(time);
  c.projector_names_ = std::move(names);
  c.projectors_ = std::move(lifted);
  return c;
}

std::size_t Context::index_of(const std::string& projector_name) const {
  for (std::size_t k = 0; k < projector_names_.size(); ++k)
    if (projector_names_[k] == projector_name) return k;
  throw UnknownIndex("context " + name_ + " has no projector " +
                     projector_name);
}

std::shared_ptr<const Family> Family::create(std::string name,
                                             std::vector<ContextPtr> contexts,
                                             const TimeGrid& grid) {
  if (contexts.empty())
    throw InvariantViolation("family " + name + ": no contexts");
  for (std::size_t i = 0; i + 1 < contexts.size(); ++i) {
    const std::size_t a = grid.index_of(contexts[i]->time());
    const std::size_t b = grid.index_of(contexts[i + 1]->time());
    if (a >= b)
      throw InvariantViolation("family " + name +
                               ": context times must be strictly increasing");
  }
  auto family = std::shared_ptr<Family>(new Family());
  family->name_ = std::move(name);
  family->contexts_ = std::move(contexts);
  family->dim_ = family->contexts_.front()->projector(0).rows();
  for (const ContextPtr& c : family->contexts_) {
    if (c->projector(0).rows() != family->dim_)
      throw SpaceMismatch("family " + family->name_ +
                          ": contexts live on different spaces");
    family->radices_.push_back(static_cast<Eigen::Index>(c->size()));
    family->atomic_count_ *= static_cast<Eigen::Index>(c->size());
  }
  return family;
}

std::vector<Eigen::Index> Family::atomic_digits(Eigen::Index flat) const {
  if (flat < 0 || flat >= atomic_count_)
    throw UnknownIndex("atomic index out of range");
  return indexing::decompose(flat, radices_);
}

Eigen::Index Family::atomic_flat(const std::vector<Eigen::Index>& digits) const {
  if (digits.size() != radices_.size())
    throw UnknownIndex("expected one projector index per context");
  for (std::size_t i = 0; i < digits.size(); ++i)
    if (digits[i] < 0 || digits[i] >= radices_[i])
      throw UnknownIndex("projector index out of range");
  return indexing::compose(radices_, digits);
}

std::vector<std::string> Family::atomic_names(Eigen::Index flat) const {
  const std::vector<Eigen::Index> digits = atomic_digits(flat);
  std::vector<std::string> names(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i)
    names[i] = contexts_[i]->projector_name(static_cast<std::size_t>(digits[i]));
  return names;
}

History History::none(FamilyPtr family) {
  std::vector<bool> mask(static_cast<std::size_t>(family->atomic_count()), false);
  return History{std::move(family), std::move(mask)};
}

History History::all(FamilyPtr family) {
  std::vector<bool> mask(static_cast<std::size_t>(family->atomic_count()), true);
  return History{std::move(family), std::move(mask)};
}

History History::event(FamilyPtr family, const std::string& time,
                       const std::string& projector_name) {
  std::size_t ctx = family->context_count();
  for (std::size_t i = 0; i < family->context_count(); ++i)
    if (family->context(i).time() == time) ctx = i;
  if (ctx == family->context_count())
    throw UnknownTime("family " + family->name() + " has no context at " + time);
  const std::size_t k = family->context(ctx).index_of(projector_name);
  History h = History::none(family);
  for (Eigen::Index a = 0; a < h.family->atomic_count(); ++a)
    if (h.family->atomic_digits(a)[ctx] == static_cast<Eigen::Index>(k))
      h.lambda[static_cast<std::size_t>(a)] = true;
  return h;
}

History history_and(const History& a, const History& b) {
  require_same_family(a, b);
  History out = a;
  for (std::size_t i = 0; i < out.lambda.size(); ++i)
    out.lambda[i] = out.lambda[i] && b.lambda[i];
  return out;
}

History history_or(const History& a, const History& b) {
  require_same_family(a, b);
  History out = a;
  for (std::size_t i = 0; i < out.lambda.size(); ++i)
    out.lambda[i] = out.lambda[i] || b.lambda[i];
  return out;
}

History history_not(const History& a) {
  History out = a;
  for (std::size_t i = 0; i < out.lambda.size(); ++i)
    out.lambda[i] = !out.lambda[i];
  return out;
}

namespace {

void require_same_space(const Family& family, const UnitarySchedule& schedule) {
  if (family.dim() != schedule.space().total_dim())
    throw SpaceMismatch("family " + family.name() +
                        " does not live on the schedule's space");
}

}  // namespace

Matrix chain_operator(const Family& family, Eigen::Index atomic,
                      const UnitarySchedule& schedule) {
  require_same_space(family, schedule);
  const std::vector<Eigen::Index> digits = family.atomic_digits(atomic);
  const std::string& t0 = schedule.grid().label(0);
  // C = U(t0,t1) P1 U(t1,t2) ... Pn U(tn,t0), with U(a,b) = propagator(b->a).
  Matrix c = schedule.propagator(family.context(0).time(), t0);
  for (std::size_t i = 0; i < family.context_count(); ++i) {
    c = c * family.context(i).projector(static_cast<std::size_t>(digits[i]));
    const std::string& here = family.context(i).time();
    const std::string& next = (i + 1 < family.context_count())
                                  ? family.context(i + 1).time()
                                  : t0;
    c = c * schedule.propagator(next, here);
  }
  return c;
}

Vector chain_adjoint_state(const Family& family, Eigen::Index atomic,
                           const UnitarySchedule& schedule,
                           const Vector& psi0) {
  require_same_space(family, schedule);
  const std::vector<Eigen::Index> digits = family.atomic_digits(atomic);
  const std::string& t0 = schedule.grid().label(0);
  Vector v = psi0;
  std::string at = t0;
  for (std::size_t i = 0; i < family.context_count(); ++i) {
    const std::string& next = family.context(i).time();
    v = schedule.evolve(std::move(v), at, next);
    v = family.context(i).projector(static_cast<std::size_t>(digits[i])) * v;
    at = next;
  }
  return schedule.evolve(std::move(v), at, t0);
}

FamilyAnalysis::FamilyAnalysis(FamilyPtr family,
                               const UnitarySchedule& schedule,
                               const Vector& psi0, double tol)
    : family_(std::move(family)) {
  if (std::abs(psi0.norm() - 1.0) > tol_norm)
    throw InvariantViolation("initial state is not normalized");
  report_.tol = tol;
  compute(schedule, {{1.0, psi0}});
}

FamilyAnalysis::FamilyAnalysis(FamilyPtr family,
                               const UnitarySchedule& schedule,
                               const Matrix& rho0, double tol)
    : family_(std::move(family)) {
  if (rho0.rows() != rho0.cols())
    throw DimensionMismatch("rho0 is not square");
  if (max_abs(Matrix(rho0 - rho0.adjoint())) > tol_eq)
    throw InvariantViolation("rho0 is not Hermitian");
  if (std::abs(rho0.trace() - Complex(1, 0)) > tol_norm)
    throw InvariantViolation("rho0 does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho0);
  std::vector<std::pair<double, Vector>> components;
  for (Eigen::Index k = 0; k < rho0.rows(); ++k) {
    const double w = es.eigenvalues()(k);
    if (w < -1e-10)
      throw InvariantViolation("rho0 has a negative eigenvalue");
    if (w > 1e-14) components.emplace_back(w, es.eigenvectors().col(k));
  }
  report_.tol = tol;
  compute(schedule, components);
}

void FamilyAnalysis::compute(
    const UnitarySchedule& schedule,
    const std::vector<std::pair<double, Vector>>& components) {
  const Family& fam = *family_;
  require_same_space(fam, schedule);
  const std::string& t0 = schedule.grid().label(0);
  const Eigen::Index n = fam.atomic_count();
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);

  for (const auto& [weight, psi] : components) {
    // Branch the evolving state by the context projectors; the leaves are the
    // chain states C+(alpha)|psi> up to a common final pull-back unitary,
    // which drops out of every inner product.
    std::vector<Vector> branches{psi};
    std::string at = t0;
    for (std::size_t i = 0; i < fam.context_count(); ++i) {
      const Context& ctx = fam.context(i);
      for (Vector& b : branches) b = schedule.evolve(std::move(b), at, ctx.time());
      at = ctx.time();
      std::vector<Vector> next;
      next.reserve(branches.size() * ctx.size());
      for (const Vector& b : branches)
        for (std::size_t k = 0; k < ctx.size(); ++k)
          next.push_back(ctx.projector(k) * b);
      branches = std::move(next);
    }
    for (Eigen::Index beta = 0; beta < n; ++beta)
      for (Eigen::Index alpha = 0; alpha < n; ++alpha)
        d(alpha, beta) +=
            weight * branches[static_cast<std::size_t>(beta)].dot(
                         branches[static_cast<std::size_t>(alpha)]);
  }

  report_.matrix = std::move(d);
  report_.worst.reset();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      if (a == b) continue;
      const double m = std::abs(report_.matrix(a, b));
      if (!report_.worst || m > report_.worst->magnitude)
        report_.worst = OffdiagWitness{a, b, m};
    }
  }
  report_.consistent = !report_.worst || report_.worst->magnitude <= report_.tol;
}

std::vector<std::string> FamilyAnalysis::witness_alpha_names() const {
  if (!report_.worst) return {};
  return family_->atomic_names(report_.worst->alpha);
}

std::vector<std::string> FamilyAnalysis::witness_beta_names() const {
  if (!report_.worst) return {};
  return family_->atomic_names(report_.worst->beta);
}

double FamilyAnalysis::lambda_sum(const std::vector<bool>& lambda) const {
  // Tr[C+(L) rho0 C(L)] with C(L) = sum over L of C(alpha) expands to the
  // double sum of decoherence entries over L x L.
  Complex s(0, 0);
  const Eigen::Index n = family_->atomic_count();
  for (Eigen::Index a = 0; a < n; ++a) {
    if (!lambda[static_cast<std::size_t>(a)]) continue;
    for (Eigen::Index b = 0; b < n; ++b)
      if (lambda[static_cast<std::size_t>(b)]) s += report_.matrix(a, b);
  }
  return s.real();
}

double FamilyAnalysis::probability(const History& history, bool force) const {
  if (history.family != family_)
    throw FamilyMismatch("history belongs to a different family");
  if (!report_.consistent && !force)
    throw InconsistentFamily(family_->name(), witness_alpha_names(),
                             witness_beta_names(), report_.worst->magnitude);
  return clamp_probability(lambda_sum(history.lambda));
}

double FamilyAnalysis::conditional(const History& a, const History& b) const {
  require_same_family(a, b);
  const double pb = probability(b);
  if (pb <= null_condition_cutoff)
    throw ConditionOnNull("conditioning event has probability " +
                          std::to_string(pb));
  const double pab = probability(history_and(a, b));
  return clamp_probability(pab / pb);
}

DecoherenceReport decoherence_functional(const FamilyPtr& family,
                                         const Vector& psi0,
                                         const UnitarySchedule& schedule,
                                         double tol) {
  return FamilyAnalysis(family, schedule, psi0, tol).report();
}

DecoherenceReport decoherence_functional(const FamilyPtr& family,
                                         const Matrix& rho0,
                                         const UnitarySchedule& schedule,
                                         double tol) {
  return FamilyAnalysis(family, schedule, rho0, tol).report();
}

double probability(const History& history, const Vector& psi0,
                   const UnitarySchedule& schedule, bool force, double tol) {
  return FamilyAnalysis(history.family, schedule, psi0, tol)
      .probability(history, force);
}

double conditional(const History& a, const History& b, const Vector& psi0,
                   const UnitarySchedule& schedule, double tol) {
  return FamilyAnalysis(a.family, schedule, psi0, tol).conditional(a, b);
}

InconsistentFamily::InconsistentFamily(std::string family,
                                       std::vector<std::string> alpha,
                                       std::vector<std::string> beta,
                                       double magnitude)
    : Error("family " + family +
            " fails the consistency condition: |D| = " +
            std::to_string(magnitude)),
      family_(std::move(family)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      magnitude_(magnitude) {}

}  // namespace histq
