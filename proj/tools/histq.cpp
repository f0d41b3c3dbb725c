// histq: command-line front end for the consistent-histories engine.
//
// Subcommands: validate, run, consistency, prob, condprob, fr-report.
// Reports go to stdout, diagnostics to stderr. Exit codes: 0 when every
// expectation holds and no query errored, 1 on assertion or query failure,
// 2 on parse or usage errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "histq/fr.hpp"
#include "histq/scenario.hpp"

namespace {

using namespace histq;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioModel load(const std::string& path) {
  return parse_scenario(read_file(path),
                        std::filesystem::path(path).stem().string());
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<Event> parse_event_list(const std::string& text) {
  std::vector<Event> events;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '&')) {
    part = trim(part);
    const auto at = part.find('@');
    if (part.empty() || at == std::string::npos)
      throw Error("bad event expression '" + part + "' (want name@time)");
    events.push_back(Event{trim(part.substr(0, at)), trim(part.substr(at + 1))});
  }
  if (events.empty()) throw Error("empty event expression");
  return events;
}

void print_report(const Report& report, const std::string& format) {
  std::cout << (format == "json" ? report.to_json() : report.to_text());
}

int finish(const Report& report, const std::string& format) {
  print_report(report, format);
  return report.all_pass() ? 0 : 1;
}

Report run_single_query(const ScenarioModel& model, Query query,
                        const RunOptions& options) {
  ScenarioModel shallow;  // share the heavy parts, run just this query
  shallow.name = model.name;
  shallow.space = model.space;
  shallow.schedule = model.schedule;
  shallow.initial = model.initial;
  shallow.families = model.families;
  shallow.contexts = model.contexts;
  shallow.queries.push_back(std::move(query));
  return run(shallow, options);
}

const FamilyPtr& family_or_fail(const ScenarioModel& model,
                                const std::string& name) {
  auto it = model.families.find(name);
  if (it == model.families.end())
    throw Error("scenario has no family named " + name);
  return it->second;
}

void check_events(const FamilyPtr& family, const std::vector<Event>& events) {
  for (const Event& e : events)
    History::event(family, e.time, e.projector);  // throws when unresolved
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"histq: consistent-histories engine for multi-time quantum "
               "experiments"};
  app.require_subcommand(1);

  std::string path, family, expr, format = "text";
  double tol = 1e-10;
  double expect_tol = 1e-9;
  bool force = false;

  app.add_option("--tol", tol, "consistency tolerance")->capture_default_str();
  app.add_option("--expect-tol", expect_tol,
                 "tolerance for expect assertions")->capture_default_str();
  app.add_option("--format", format, "output format (text|json)")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_flag("--force", force,
               "compute probabilities on inconsistent families (clearly "
               "labeled; not probabilities)");

  CLI::App* validate = app.add_subcommand("validate", "parse a scenario file");
  validate->add_option("file", path)->required();

  CLI::App* runcmd = app.add_subcommand("run", "run all queries of a scenario");
  runcmd->add_option("file", path)->required();

  CLI::App* consistency =
      app.add_subcommand("consistency", "print a family's decoherence report");
  consistency->add_option("file", path)->required();
  consistency->add_option("family", family)->required();

  CLI::App* prob = app.add_subcommand("prob", "ad-hoc probability query");
  prob->add_option("file", path)->required();
  prob->add_option("--family", family)->required();
  prob->add_option("expr", expr, "event expression, e.g. \"w1ok@t4 & w2ok@t5\"")
      ->required();

  CLI::App* condprob =
      app.add_subcommand("condprob", "ad-hoc conditional probability query");
  condprob->add_option("file", path)->required();
  condprob->add_option("--family", family)->required();
  condprob->add_option("expr", expr,
                       "event expression, e.g. \"b_up@t3 | w1ok@t4\"")
      ->required();

  CLI::App* frreport =
      app.add_subcommand("fr-report", "run the built-in Frauchiger-Renner model");

  // global flags remain usable after the subcommand name
  for (CLI::App* sub : {validate, runcmd, consistency, prob, condprob, frreport})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunOptions options;
  options.consistency_tol = tol;
  options.expect_tol = expect_tol;
  options.force = force;

  try {
    if (validate->parsed()) {
      const ScenarioModel model = load(path);
      std::cout << "ok: " << model.name << " ("
                << model.space->total_dim() << " dimensions, "
                << model.intervals.size() << " intervals, "
                << model.contexts.size() << " contexts, "
                << model.families.size() << " families, "
                << model.queries.size() << " queries)\n";
      return 0;
    }
    if (runcmd->parsed()) return finish(run(load(path), options), format);
    if (frreport->parsed()) return finish(fr_report(build_fr(), options), format);

    if (consistency->parsed()) {
      const ScenarioModel model = load(path);
      FamilyAnalysis analysis(family_or_fail(model, family), *model.schedule,
                              model.initial, options.consistency_tol);
      const DecoherenceReport& rep = analysis.report();
      Report out;
      out.scenario = model.name;
      out.tolerance = options.expect_tol;
      ReportEntry entry;
      entry.query = "consistency " + family;
      entry.kind = "consistency";
      entry.consistent = rep.consistent;
      if (!rep.consistent)
        entry.witness = Witness{analysis.witness_alpha_names(),
                                analysis.witness_beta_names(),
                                rep.worst->magnitude};
      out.results.push_back(std::move(entry));
      print_report(out, format);
      if (format == "text") {
        const Eigen::Index n = rep.matrix.rows();
        std::cout << "decoherence functional: " << n << " x " << n
                  << " atomic histories, consistency tolerance " << rep.tol
                  << "\n";
        if (rep.worst)
          std::cout << "max off-diagonal |D| = " << rep.worst->magnitude
                    << "\n";
        if (n <= 16) {
          std::cout << "D (real, imag):\n";
          for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
              const Complex d = rep.matrix(a, b);
              std::printf("  (%+.6f,%+.6f)", d.real(), d.imag());
            }
            std::cout << "\n";
          }
        }
      }
      return 0;
    }

    if (prob->parsed() || condprob->parsed()) {
      const ScenarioModel model = load(path);
      const FamilyPtr& fam = family_or_fail(model, family);
      Query q;
      q.family = family;
      if (prob->parsed()) {
        q.kind = Query::Kind::Prob;
        q.events = parse_event_list(expr);
        check_events(fam, q.events);
        q.text = "prob " + family + " : " + trim(expr);
      } else {
        const auto bar = expr.find('|');
        if (bar == std::string::npos)
          throw Error("condprob expression needs 'target | given'");
        q.kind = Query::Kind::CondProb;
        q.events = parse_event_list(expr.substr(0, bar));
        q.given = parse_event_list(expr.substr(bar + 1));
        check_events(fam, q.events);
        check_events(fam, q.given);
        q.text = "condprob " + family + " : " + trim(expr);
      }
      return finish(run_single_query(model, std::move(q), options), format);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InconsistentFamily& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
