#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "histq/scenario.hpp"
#include "text_util.hpp"

namespace histq {

namespace {

std::string kind_name(Query::Kind k) {
  switch (k) {
    case Query::Kind::Prob: return "prob";
    case Query::Kind::CondProb: return "condprob";
    case Query::Kind::Consistency: return "consistency";
    case Query::Kind::Amplitude: return "amplitude";
  }
  return "?";
}

History build_history(const FamilyPtr& family, const std::vector<Event>& events) {
  History h = History::all(family);
  for (const Event& e : events)
    h = history_and(h, History::event(family, e.time, e.projector));
  return h;
}

Witness witness_of(const FamilyAnalysis& analysis) {
  Witness w;
  w.alpha = analysis.witness_alpha_names();
  w.beta = analysis.witness_beta_names();
  w.magnitude = analysis.report().worst ? analysis.report().worst->magnitude : 0.0;
  return w;
}

void json_names(std::ostringstream& out, const std::vector<std::string>& names) {
  out << "[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out << ", ";
    out << '"' << detail::json_escape(names[i]) << '"';
  }
  out << "]";
}

}  // namespace

bool Report::all_pass() const {
  for (const ReportEntry& e : results)
    if (!e.pass) return false;
  return true;
}

std::string Report::to_json() const {
  std::ostringstream out;
  out << "{\n";
  out << "  \"scenario\": \"" << detail::json_escape(scenario) << "\",\n";
  if (results.empty()) {
    out << "  \"results\": [],\n";
  } else {
    out << "  \"results\": [\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const ReportEntry& e = results[i];
      out << "    {\n";
      out << "      \"query\": \"" << detail::json_escape(e.query) << "\",\n";
      out << "      \"kind\": \"" << e.kind << "\",\n";
      out << "      \"value\": ";
      if (e.value)
        out << detail::fmt12(*e.value);
      else
        out << "null";
      out << ",\n";
      out << "      \"consistent\": ";
      if (e.consistent)
        out << (*e.consistent ? "true" : "false");
      else
        out << "null";
      out << ",\n";
      out << "      \"witness\": ";
      if (e.witness) {
        out << "{\n        \"alpha\": ";
        json_names(out, e.witness->alpha);
        out << ",\n        \"beta\": ";
        json_names(out, e.witness->beta);
        out << ",\n        \"magnitude\": " << detail::fmt12(e.witness->magnitude);
        out << "\n      }";
      } else {
        out << "null";
      }
      out << ",\n";
      out << "      \"expected\": ";
      if (std::holds_alternative<double>(e.expected))
        out << detail::fmt12(std::get<double>(e.expected));
      else if (std::holds_alternative<std::string>(e.expected))
        out << '"' << detail::json_escape(std::get<std::string>(e.expected))
            << '"';
      else
        out << "null";
      out << ",\n";
      out << "      \"pass\": " << (e.pass ? "true" : "false") << "\n";
      out << (i + 1 < results.size() ? "    },\n" : "    }\n");
    }
    out << "  ],\n";
  }
  out << "  \"tolerance\": " << detail::fmt12(tolerance) << "\n";
  out << "}\n";
  return out.str();
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "scenario " << scenario << "\n";
  std::size_t passed = 0;
  for (const ReportEntry& e : results) {
    out << (e.pass ? "  pass  " : "  FAIL  ") << e.query;
    if (e.value)
      out << " = " << detail::fmt12(*e.value);
    else if (e.kind == "consistency" && e.consistent)
      out << " = " << (*e.consistent ? "consistent" : "inconsistent");
    if (std::holds_alternative<double>(e.expected))
      out << " (expect " << detail::fmt12(std::get<double>(e.expected)) << ")";
    else if (std::holds_alternative<std::string>(e.expected))
      out << " (expect " << std::get<std::string>(e.expected) << ")";
    if (e.witness) {
      out << " [witness |D(";
      for (std::size_t i = 0; i < e.witness->alpha.size(); ++i)
        out << (i ? "," : "") << e.witness->alpha[i];
      out << " ; ";
      for (std::size_t i = 0; i < e.witness->beta.size(); ++i)
        out << (i ? "," : "") << e.witness->beta[i];
      out << ")| = " << detail::fmt12(e.witness->magnitude) << "]";
    }
    if (!e.note.empty()) out << " [" << e.note << "]";
    out << "\n";
    if (e.pass) ++passed;
  }
  out << "summary: " << passed << "/" << results.size()
      << " passed (tolerance " << detail::fmt12(tolerance) << ")\n";
  return out.str();
}

Report run(const ScenarioModel& model, const RunOptions& options) {
  Report report;
  report.scenario = model.name;
  report.tolerance = options.expect_tol;

  std::map<std::string, std::shared_ptr<const FamilyAnalysis>> analyses;
  auto analysis_of = [&](const std::string& family)
      -> const FamilyAnalysis& {
    auto it = analyses.find(family);
    if (it == analyses.end()) {
      auto a = std::make_shared<FamilyAnalysis>(
          model.families.at(family), *model.schedule, model.initial,
          options.consistency_tol);
      it = analyses.emplace(family, std::move(a)).first;
    }
    return *it->second;
  };

  for (const Query& q : model.queries) {
    ReportEntry entry;
    entry.query = q.text;
    entry.kind = kind_name(q.kind);
    if (q.expected)
      entry.expected = q.expected->real();
    else if (q.expect_consistent)
      entry.expected = std::string(*q.expect_consistent ? "consistent"
                                                        : "inconsistent");

    auto check_expected = [&](Complex value) {
      if (!q.expected) return true;
      return std::abs(value - *q.expected) <= options.expect_tol;
    };

    try {
      switch (q.kind) {
        case Query::Kind::Prob: {
          const FamilyAnalysis& a = analysis_of(q.family);
          entry.consistent = a.report().consistent;
          if (!a.report().consistent) entry.witness = witness_of(a);
          const History h = build_history(a.family(), q.events);
          const double p = a.probability(h, options.force);
          entry.value = p;
          entry.pass = check_expected(Complex(p, 0));
          if (options.force && !a.report().consistent)
            entry.note = "NOT A PROBABILITY (family inconsistent)";
          break;
        }
        case Query::Kind::CondProb: {
          const FamilyAnalysis& a = analysis_of(q.family);
          entry.consistent = a.report().consistent;
          if (!a.report().consistent) entry.witness = witness_of(a);
          const History h = build_history(a.family(), q.events);
          const History g = build_history(a.family(), q.given);
          const double p = a.conditional(h, g);
          entry.value = p;
          entry.pass = check_expected(Complex(p, 0));
          break;
        }
        case Query::Kind::Consistency: {
          const FamilyAnalysis& a = analysis_of(q.family);
          entry.consistent = a.report().consistent;
          if (!a.report().consistent) entry.witness = witness_of(a);
          if (q.expect_consistent)
            entry.pass = (*q.expect_consistent == a.report().consistent);
          break;
        }
        case Query::Kind::Amplitude: {
          const Vector state = model.schedule->evolve(
              model.initial, model.schedule->grid().label(0), q.at_time);
          const Complex amp = inner(q.amplitude_state, state);
          entry.value = amp.real();
          entry.pass = check_expected(amp);
          break;
        }
      }
    } catch (const InconsistentFamily& e) {
      entry.value.reset();
      entry.consistent = false;
      entry.witness = Witness{e.alpha(), e.beta(), e.magnitude()};
      entry.pass = false;
      entry.note = "InconsistentFamily";
    } catch (const ConditionOnNull&) {
      entry.value.reset();
      entry.pass = false;
      entry.note = "ConditionOnNull";
    }
    report.results.push_back(std::move(entry));
  }
  return report;
}

}  // namespace histq
