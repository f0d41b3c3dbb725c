#include "histq/qspace.hpp"

#include <algorithm>
#include <set>

#include "histq/indexing.hpp"

namespace histq {

CompositeSpace::CompositeSpace(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty())
    throw InvariantViolation("composite space needs at least one factor");
  std::set<std::string> names;
  for (const Factor& f : factors_) {
    if (f.dim < 1)
      throw InvariantViolation("factor " + f.name + ": dim must be >= 1");
    if (static_cast<Eigen::Index>(f.basis_labels.size()) != f.dim)
      throw InvariantViolation("factor " + f.name + ": expected " +
                               std::to_string(f.dim) + " basis labels");
    std::set<std::string> labels(f.basis_labels.begin(), f.basis_labels.end());
    if (labels.size() != f.basis_labels.size())
      throw InvariantViolation("factor " + f.name + ": duplicate basis label");
    if (!names.insert(f.name).second)
      throw InvariantViolation("duplicate factor name " + f.name);
  }
  strides_.assign(factors_.size(), 1);
  for (std::size_t k = factors_.size(); k-- > 0;) {
    if (k + 1 < factors_.size())
      strides_[k] = strides_[k + 1] * factors_[k + 1].dim;
  }
  total_dim_ = strides_[0] * factors_[0].dim;
}

std::size_t CompositeSpace::factor_position(const std::string& name) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].name == name) return i;
  throw UnknownFactor("unknown factor " + name);
}

Eigen::Index CompositeSpace::label_index(std::size_t position,
                                         const std::string& label) const {
  const Factor& f = factors_[position];
  for (Eigen::Index i = 0; i < f.dim; ++i)
    if (f.basis_labels[static_cast<std::size_t>(i)] == label) return i;
  throw UnknownLabel("factor " + f.name + " has no basis label " + label);
}

std::optional<CompositeSpace::LabelHit> CompositeSpace::find_label(
    const std::string& label) const {
  std::optional<LabelHit> hit;
  for (std::size_t p = 0; p < factors_.size(); ++p) {
    const Factor& f = factors_[p];
    auto it = std::find(f.basis_labels.begin(), f.basis_labels.end(), label);
    if (it == f.basis_labels.end()) continue;
    if (hit)
      throw InvariantViolation("label " + label +
                               " is ambiguous across factors");
    hit = LabelHit{p, static_cast<Eigen::Index>(it - f.basis_labels.begin())};
  }
  return hit;
}

Eigen::Index CompositeSpace::index_of(
    const std::vector<Eigen::Index>& digits) const {
  if (digits.size() != factors_.size())
    throw WrongArity("expected one digit per factor");
  return indexing::compose(dims(), digits);
}

std::vector<Eigen::Index> CompositeSpace::digits_of(Eigen::Index flat) const {
  return indexing::decompose(flat, dims());
}

std::vector<Eigen::Index> CompositeSpace::dims() const {
  std::vector<Eigen::Index> d(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) d[i] = factors_[i].dim;
  return d;
}

Vector basis_state(const CompositeSpace& space,
                   const std::vector<std::string>& labels) {
  if (labels.size() != space.factor_count())
    throw WrongArity("expected " + std::to_string(space.factor_count()) +
                     " labels, got " + std::to_string(labels.size()));
  std::vector<Eigen::Index> digits(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    digits[i] = space.label_index(i, labels[i]);
  Vector v = Vector::Zero(space.total_dim());
  v(space.index_of(digits)) = Complex(1, 0);
  return v;
}

Vector superpose(const std::vector<std::pair<Complex, Vector>>& terms) {
  if (terms.empty()) return Vector();
  const Eigen::Index dim = terms.front().second.size();
  Vector out = Vector::Zero(dim);
  for (const auto& [c, v] : terms) {
    if (v.size() != dim)
      throw SpaceMismatch("superpose: states live on different spaces");
    out += c * v;
  }
  return out;
}

Complex inner(const Vector& u, const Vector& v) {
  if (u.size() != v.size())
    throw SpaceMismatch("inner: states live on different spaces");
  return u.dot(v);
}

Matrix lift(const Matrix& local, const CompositeSpace& space,
            const std::vector<std::string>& on_factors) {
  if (local.rows() != local.cols())
    throw DimensionMismatch("lift: local operator is not square");

  std::vector<std::size_t> positions;
  positions.reserve(on_factors.size());
  for (const std::string& name : on_factors)
    positions.push_back(space.factor_position(name));
  std::sort(positions.begin(), positions.end());
  if (std::adjacent_find(positions.begin(), positions.end()) != positions.end())
    throw DimensionMismatch("lift: factor named twice");

  std::vector<Eigen::Index> loc_dims, loc_strides;
  for (std::size_t p : positions) {
    loc_dims.push_back(space.factor(p).dim);
    loc_strides.push_back(space.stride(p));
  }
  std::vector<Eigen::Index> rest_dims, rest_strides;
  for (std::size_t p = 0; p < space.factor_count(); ++p) {
    if (std::find(positions.begin(), positions.end(), p) == positions.end()) {
      rest_dims.push_back(space.factor(p).dim);
      rest_strides.push_back(space.stride(p));
    }
  }

  const Eigen::Index dloc = indexing::total(loc_dims);
  if (local.rows() != dloc)
    throw DimensionMismatch("lift: operator dim " + std::to_string(local.rows()) +
                            " does not match factor product " +
                            std::to_string(dloc));

  const std::vector<Eigen::Index> loc_c =
      indexing::contribution_table(loc_dims, loc_strides);
  const std::vector<Eigen::Index> rest_c =
      indexing::contribution_table(rest_dims, rest_strides);

  Matrix out = Matrix::Zero(space.total_dim(), space.total_dim());
  for (Eigen::Index a = 0; a < dloc; ++a) {
    for (Eigen::Index b = 0; b < dloc; ++b) {
      const Complex v = local(a, b);
      if (v == Complex(0, 0)) continue;
      for (Eigen::Index r : rest_c)
        out(loc_c[static_cast<std::size_t>(a)] + r,
            loc_c[static_cast<std::size_t>(b)] + r) = v;
    }
  }
  return out;
}

}  // namespace histq
