#include <doctest.h>

#include <fstream>
#include <sstream>

#include "histq/scenario.hpp"
#include "support.hpp"

using namespace histq;

namespace {

std::string minimal_text() {
  return R"(
times t0
factor A dim=2 basis=[z,o]
state s = 1 |z>
initial = s
context Cz at t0 { pz = |z><z| on A ; rest pr }
family F = [Cz]
query prob F : pz@t0 expect 1
)";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fr_hq_path() { return std::string(HISTQ_SCENARIO_DIR) + "/fr.hq"; }

}  // namespace

TEST_CASE("minimal scenario parses and runs") {
  const ScenarioModel model = parse_scenario(minimal_text(), "mini");
  CHECK(model.space->total_dim() == 2);
  CHECK(model.queries.size() == 1);

  const Report report = run(model);
  REQUIRE(report.results.size() == 1);
  CHECK(report.results[0].pass);
  CHECK(report.results[0].value == doctest::Approx(1.0));
  CHECK(*report.results[0].consistent);
  CHECK(report.all_pass());
}

TEST_CASE("model with no queries runs to an empty report") {
  const ScenarioModel model = parse_scenario(
      "times t0\nfactor A dim=2 basis=[z,o]\n", "empty");
  const Report report = run(model);
  CHECK(report.results.empty());
  CHECK(report.all_pass());
  CHECK(report.to_json().find("\"results\": []") != std::string::npos);
}

TEST_CASE("coefficient grammar") {
  const ScenarioModel model = parse_scenario(R"(
times t0
factor A dim=2 basis=[z,o]
state a = sqrt(2/3) |z> + sqrt(1/3) |o>
state b = 1/3 |z>
state c = 0.25 |o>
state d = (1/2)*i |z>
state e = -sqrt(1/2) |z> + sqrt(1/2) |o>
state f = 2e-3 |z>
)", "coeffs");
  auto amp = [&](const char* name, int k) {
    return model.find_state(name)->vec(k);
  };
  CHECK(amp("a", 0) == Complex(std::sqrt(2.0 / 3.0), 0));
  CHECK(amp("a", 1) == Complex(std::sqrt(1.0 / 3.0), 0));
  CHECK(amp("b", 0) == Complex(1.0 / 3.0, 0));
  CHECK(amp("c", 1) == Complex(0.25, 0));
  CHECK(amp("d", 0) == Complex(0, 0.5));
  CHECK(amp("e", 0) == Complex(-std::sqrt(0.5), 0));
  CHECK(amp("f", 0) == Complex(2e-3, 0));
}

TEST_CASE("parse errors carry locations") {
  // missing '>' in a ket
  try {
    parse_scenario("times t0\nfactor A dim=2 basis=[z,o]\nstate s = 1 |z");
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
    CHECK(e.col() > 1);
  }

  // unknown state reference
  CHECK_THROWS_AS(parse_scenario("times t0\nfactor A dim=2 basis=[z,o]\n"
                                 "initial = nope\n"),
                  UnknownReference);

  // unknown family in a query
  CHECK_THROWS_AS(parse_scenario(minimal_text() +
                                 "query prob G : pz@t0\n"),
                  UnknownReference);

  // reserved word as a name
  CHECK_THROWS_AS(parse_scenario("times t0\nfactor state dim=2 basis=[z,o]\n"),
                  SyntaxError);

  // duplicate factor
  CHECK_THROWS_AS(parse_scenario("times t0\nfactor A dim=2 basis=[z,o]\n"
                                 "factor A dim=2 basis=[w,v]\n"),
                  InvariantViolation);

  // basis arity mismatch
  CHECK_THROWS_AS(parse_scenario("times t0\nfactor A dim=3 basis=[z,o]\n"),
                  InvariantViolation);
}

TEST_CASE("context must resolve the identity") {
  // two labels of a dim-3 factor without a complement projector
  const std::string text =
      "times t0\nfactor B dim=3 basis=[u,v,w]\n"
      "context C at t0 { pu = |u><u| on B ; pv = |v><v| on B }\n";
  try {
    parse_scenario(text);
    CHECK(false);
  } catch (const InvariantViolation& e) {
    CHECK(std::string(e.what()).find("does not sum to identity") !=
          std::string::npos);
  }

  // with the complement it parses
  CHECK_NOTHROW(parse_scenario(
      "times t0\nfactor B dim=3 basis=[u,v,w]\n"
      "context C at t0 { pu = |u><u| on B ; pv = |v><v| on B ; rest pr }\n"));
}

TEST_CASE("non-isometric interval pairs are rejected as non-unitary") {
  const std::string text =
      "times t0, t1\nfactor A dim=2 basis=[z,o]\n"
      "interval t0 -> t1 on A { |z> -> |z> ; |o> -> |z> }\n";
  CHECK_THROWS_AS(parse_scenario(text), NonUnitaryStep);
}

TEST_CASE("interval mappings must live on the declared factors") {
  const std::string text =
      "times t0, t1\n"
      "factor A dim=2 basis=[z,o]\nfactor B dim=2 basis=[u,v]\n"
      "interval t0 -> t1 on A { |u> -> |v> }\n";
  CHECK_THROWS_AS(parse_scenario(text), InvariantViolation);
}

TEST_CASE("initial must cover all factors and be normalized") {
  CHECK_THROWS_AS(parse_scenario("times t0\nfactor A dim=2 basis=[z,o]\n"
                                 "factor B dim=2 basis=[u,v]\ninitial = 1 |z>\n"),
                  InvariantViolation);
  CHECK_THROWS_AS(parse_scenario("times t0\nfactor A dim=2 basis=[z,o]\n"
                                 "initial = 2 |z>\n"),
                  InvariantViolation);
}

TEST_CASE("expected probabilities must lie in [0,1]") {
  CHECK_THROWS_AS(parse_scenario(minimal_text() +
                                 "query prob F : pz@t0 expect 1.5\n"),
                  InvariantViolation);
}

TEST_CASE("condprob on a null condition is flagged, not fatal") {
  const std::string text =
      "times t0\nfactor A dim=2 basis=[z,o]\nstate s = 1 |z>\ninitial = s\n"
      "context C at t0 { pz = |z><z| on A ; po = |o><o| on A }\n"
      "family F = [C]\n"
      "query condprob F : pz@t0 | po@t0 expect 1\n";
  const Report report = run(parse_scenario(text, "null"));
  REQUIRE(report.results.size() == 1);
  CHECK_FALSE(report.results[0].pass);
  CHECK_FALSE(report.results[0].value.has_value());
  CHECK(report.results[0].note == "ConditionOnNull");
  CHECK(report.to_text().find("ConditionOnNull") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  const std::string text = read_file(fr_hq_path());
  const ScenarioModel m1 = parse_scenario(text, "fr");
  const ScenarioModel m2 = parse_scenario(text, "fr");
  CHECK(run(m1).to_json() == run(m2).to_json());
}

TEST_CASE("render/parse round trip reproduces the report") {
  SUBCASE("minimal") {
    const ScenarioModel model = parse_scenario(minimal_text(), "mini");
    const ScenarioModel re = parse_scenario(render(model), "mini");
    CHECK(run(model).to_json() == run(re).to_json());
  }
  SUBCASE("complex coefficients") {
    const std::string text =
        "times t0, t1\nfactor A dim=2 basis=[z,o]\n"
        "state s = sqrt(1/2) |z> + (sqrt(1/2))*i |o>\ninitial = s\n"
        "interval t0 -> t1 on A { |z> -> |o> ; |o> -> (-1)*i |z> }\n"
        "context C at t1 { pz = |z><z| on A ; po = |o><o| on A }\n"
        "family F = [C]\n"
        "query prob F : pz@t1 expect 1/2\n"
        "query amplitude (0.70710678118654757)*i |z> + sqrt(1/2) |o> at t1\n";
    const ScenarioModel model = parse_scenario(text, "cplx");
    const Report r1 = run(model);
    CHECK(r1.all_pass());
    const ScenarioModel re = parse_scenario(render(model), "cplx");
    CHECK(r1.to_json() == run(re).to_json());
  }
  SUBCASE("fr.hq") {
    const ScenarioModel model = parse_scenario(read_file(fr_hq_path()), "fr");
    const ScenarioModel re = parse_scenario(render(model), "fr");
    CHECK(run(model).to_json() == run(re).to_json());
  }
}

TEST_CASE("events can intersect at one time") {
  const std::string text = minimal_text() +
                           "query prob F : pz@t0 & pr@t0 expect 0\n";
  const Report report = run(parse_scenario(text, "mini"));
  CHECK(report.results.back().pass);
  CHECK(*report.results.back().value == 0.0);
}

TEST_CASE("report JSON shape") {
  const Report report = run(parse_scenario(minimal_text(), "mini"));
  const std::string json = report.to_json();
  CHECK(json.find("\"scenario\": \"mini\"") != std::string::npos);
  CHECK(json.find("\"query\": \"prob F : pz@t0\"") != std::string::npos);
  CHECK(json.find("\"kind\": \"prob\"") != std::string::npos);
  CHECK(json.find("\"value\": 1") != std::string::npos);
  CHECK(json.find("\"consistent\": true") != std::string::npos);
  CHECK(json.find("\"witness\": null") != std::string::npos);
  CHECK(json.find("\"expected\": 1") != std::string::npos);
  CHECK(json.find("\"pass\": true") != std::string::npos);
  CHECK(json.find("\"tolerance\": 1e-09") != std::string::npos);
}
