#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "histq/histories.hpp"

// The scenario description language and its runner. A scenario file declares
// a time grid, factors, named states, the initial state, interval isometries,
// contexts, families and queries; running a model executes the queries in
// order and produces a deterministic report (stable ordering, fixed float
// formatting) in text or JSON form.
//
// Grammar (whitespace-insensitive, '#' comments to end of line):
//
//   times t0, t1, ...
//   factor <name> dim=<int> basis=[<label>{,<label>}]
//   state <name> = <expr>
//   initial = <expr>                        # must cover all factors once
//   interval <ti> -> <tj> on <factor>{,<factor>} { <expr> -> <expr> ; ... }
//   context <name> at <t> { <pname> = |label><label| on <factor> ; ... ;
//                           rest <pname> }  # complement projector I - sum
//   family <name> = [<context>{,<context>}]
//   query prob <family> : <event>{ & <event>} [expect <coeff>]
//   query condprob <family> : <event>{ & <event>} | <event>{ & <event>}
//                           [expect <coeff>]
//   query consistency <family> [expect consistent|inconsistent]
//   query amplitude <expr> at <t> [expect <coeff>]
//
// with <event> := <pname>@<t>, <expr> a sum of optionally scaled tensor
// products of kets |l1,l2,...> and named states joined by (x), and <coeff>
// := real | real/real | sqrt(real/real) | (<coeff>)*i | -<coeff>.

namespace histq {

// A state on a subset of the factors, kept with its (sorted) positions so it
// can be tensored into larger products.
struct LocalState {
  std::vector<std::size_t> positions;
  Vector vec;
};

struct StateDecl {
  std::string name;
  LocalState value;
};

struct IntervalDecl {
  std::string from;
  std::string to;
  std::vector<std::string> factors;       // in composite order
  std::vector<IsometryPair> local_pairs;  // on the factor-subset product space
};

struct ContextDecl {
  std::string name;
  std::string time;
  std::vector<Context::PointerEntry> entries;
  std::optional<std::string> rest_name;
};

struct FamilyDecl {
  std::string name;
  std::vector<std::string> contexts;
};

struct Event {
  std::string projector;
  std::string time;
};

struct Query {
  enum class Kind { Prob, CondProb, Consistency, Amplitude };
  Kind kind = Kind::Prob;
  std::string text;  // canonical echo used in reports
  std::string family;
  std::vector<Event> events;  // prob/condprob target
  std::vector<Event> given;   // condprob condition
  Vector amplitude_state;     // full-space pattern for amplitude queries
  std::string amplitude_text;
  std::string at_time;
  std::optional<Complex> expected;
  std::optional<bool> expect_consistent;
};

struct ScenarioModel {
  std::string name;
  SpacePtr space;
  std::shared_ptr<UnitarySchedule> schedule;
  std::vector<StateDecl> states;
  Vector initial;
  std::vector<IntervalDecl> intervals;
  std::vector<ContextDecl> context_decls;
  std::map<std::string, ContextPtr> contexts;
  std::vector<FamilyDecl> family_decls;
  std::map<std::string, FamilyPtr> families;
  std::vector<Query> queries;

  const LocalState* find_state(const std::string& name) const;
};

ScenarioModel parse_scenario(std::string_view text, std::string name = "scenario");

// Prints a model back as scenario text; reparsing yields a model that
// produces an identical report (coefficients are emitted with full
// precision).
std::string render(const ScenarioModel& model);

struct Witness {
  std::vector<std::string> alpha;
  std::vector<std::string> beta;
  double magnitude = 0.0;
};

struct ReportEntry {
  std::string query;
  std::string kind;
  std::optional<double> value;
  std::optional<bool> consistent;
  std::optional<Witness> witness;
  // number, "consistent"/"inconsistent", or absent
  std::variant<std::monostate, double, std::string> expected;
  bool pass = true;
  std::string note;  // diagnostics for the text format (error names etc.)
};

struct Report {
  std::string scenario;
  std::vector<ReportEntry> results;
  double tolerance = 1e-9;

  bool all_pass() const;
  std::string to_json() const;  // deterministic: stable key order, %.12g floats
  std::string to_text() const;
};

struct RunOptions {
  double expect_tol = 1e-9;       // |value - expected| comparison
  double consistency_tol = 1e-10; // gate threshold for the families
  bool force = false;             // compute probabilities past the gate
};

Report run(const ScenarioModel& model, const RunOptions& options = {});

}  // namespace histq
