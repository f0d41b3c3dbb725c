#include <sstream>

#include "histq/indexing.hpp"
#include "histq/scenario.hpp"
#include "text_util.hpp"

namespace histq {

namespace {

std::string ket_of(const CompositeSpace& space,
                   const std::vector<std::size_t>& positions,
                   Eigen::Index flat) {
  std::vector<Eigen::Index> dims;
  for (std::size_t p : positions) dims.push_back(space.factor(p).dim);
  const std::vector<Eigen::Index> digits = indexing::decompose(flat, dims);
  std::string out = "|";
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (k) out += ",";
    out += space.factor(positions[k])
               .basis_labels[static_cast<std::size_t>(digits[k])];
  }
  return out + ">";
}

// A local state as a sum of scaled kets. Mixed complex amplitudes split into
// a real and an imaginary term because a single coefficient literal is either
// real or purely imaginary.
std::string expr_of(const CompositeSpace& space, const LocalState& s) {
  std::string out;
  auto append = [&](Complex c, const std::string& ket) {
    std::string coeff;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      coeff = detail::fmt17(negative ? -c.real() : c.real());
    } else {
      coeff = "(" + detail::fmt17(c.imag()) + ")*i";
    }
    if (out.empty())
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    out += coeff + " " + ket;
  };
  for (Eigen::Index k = 0; k < s.vec.size(); ++k) {
    const Complex c = s.vec(k);
    if (c == Complex(0, 0)) continue;
    const std::string ket = ket_of(space, s.positions, k);
    if (c.real() != 0.0) append(Complex(c.real(), 0), ket);
    if (c.imag() != 0.0) append(Complex(0, c.imag()), ket);
  }
  if (out.empty()) out = "0 " + ket_of(space, s.positions, 0);
  return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string render(const ScenarioModel& model) {
  const CompositeSpace& space = *model.space;
  std::ostringstream out;
  out << "# scenario " << model.name << "\n";
  if (model.schedule)
    out << "times " << join(model.schedule->grid().labels(), ", ") << "\n";
  for (const Factor& f : space.factors())
    out << "factor " << f.name << " dim=" << f.dim << " basis=["
        << join(f.basis_labels, ",") << "]\n";
  for (const StateDecl& s : model.states)
    out << "state " << s.name << " = " << expr_of(space, s.value) << "\n";
  if (model.initial.size() != 0) {
    LocalState full;
    for (std::size_t p = 0; p < space.factor_count(); ++p)
      full.positions.push_back(p);
    full.vec = model.initial;
    out << "initial = " << expr_of(space, full) << "\n";
  }
  for (const IntervalDecl& iv : model.intervals) {
    std::vector<std::size_t> positions;
    for (const std::string& f : iv.factors)
      positions.push_back(space.factor_position(f));
    out << "interval " << iv.from << " -> " << iv.to << " on "
        << join(iv.factors, ",") << " {\n";
    for (std::size_t k = 0; k < iv.local_pairs.size(); ++k) {
      const IsometryPair& p = iv.local_pairs[k];
      out << "  " << expr_of(space, {positions, p.input}) << " -> "
          << expr_of(space, {positions, p.output});
      out << (k + 1 < iv.local_pairs.size() ? " ;\n" : "\n");
    }
    out << "}\n";
  }
  for (const ContextDecl& c : model.context_decls) {
    out << "context " << c.name << " at " << c.time << " { ";
    for (std::size_t k = 0; k < c.entries.size(); ++k) {
      const auto& e = c.entries[k];
      if (k) out << " ; ";
      out << e.projector_name << " = |" << e.label << "><" << e.label
          << "| on " << e.factor;
    }
    if (c.rest_name) out << " ; rest " << *c.rest_name;
    out << " }\n";
  }
  for (const FamilyDecl& f : model.family_decls)
    out << "family " << f.name << " = [" << join(f.contexts, ", ") << "]\n";
  for (const Query& q : model.queries) {
    out << "query " << q.text;
    if (q.expect_consistent)
      out << " expect " << (*q.expect_consistent ? "consistent" : "inconsistent");
    else if (q.expected)
      out << " expect " << detail::coeff_literal(*q.expected);
    out << "\n";
  }
  return out.str();
}

}  // namespace histq
