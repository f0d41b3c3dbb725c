#include "histq/fr.hpp"

#include <cmath>

namespace histq {

namespace {

Vector unit(Eigen::Index dim, Eigen::Index k) { return Vector::Unit(dim, k); }

LocalState local(std::vector<std::size_t> positions, Vector v) {
  return LocalState{std::move(positions), std::move(v)};
}

Query make_prob(std::string family, std::vector<Event> events, double expect) {
  Query q;
  q.kind = Query::Kind::Prob;
  q.family = family;
  q.events = events;
  q.expected = Complex(expect, 0);
  q.text = "prob " + family + " : ";
  for (std::size_t i = 0; i < events.size(); ++i)
    q.text += (i ? " & " : "") + events[i].projector + "@" + events[i].time;
  return q;
}

Query make_condprob(std::string family, Event target, Event given,
                    double expect) {
  Query q;
  q.kind = Query::Kind::CondProb;
  q.family = family;
  q.events = {target};
  q.given = {given};
  q.expected = Complex(expect, 0);
  q.text = "condprob " + family + " : " + target.projector + "@" +
           target.time + " | " + given.projector + "@" + given.time;
  return q;
}

Query make_consistency(std::string family, bool expect_consistent) {
  Query q;
  q.kind = Query::Kind::Consistency;
  q.family = family;
  q.expect_consistent = expect_consistent;
  q.text = "consistency " + family;
  return q;
}

Query make_amplitude(std::string text, Vector pattern, std::string at,
                     double expect) {
  Query q;
  q.kind = Query::Kind::Amplitude;
  q.amplitude_state = std::move(pattern);
  q.amplitude_text = text;
  q.at_time = at;
  q.expected = Complex(expect, 0);
  q.text = "amplitude " + text + " at " + at;
  return q;
}

}  // namespace

ScenarioModel build_fr(int extra_instrument_levels) {
  ScenarioModel m;
  m.name = "fr";

  auto instrument = [&](std::string name, std::vector<std::string> labels,
                        const std::string& stem) {
    for (int k = 0; k < extra_instrument_levels; ++k)
      labels.push_back(stem + "_x" + std::to_string(k + 1));
    return Factor{std::move(name), static_cast<Eigen::Index>(labels.size()),
                  std::move(labels)};
  };

  std::vector<Factor> factors;
  factors.push_back(Factor{"C", 2, {"h", "t"}});
  factors.push_back(instrument("F1", {"a0", "a_h", "a_t"}, "a"));
  factors.push_back(Factor{"q", 2, {"down", "up"}});
  factors.push_back(instrument("F2", {"b0", "b_down", "b_up"}, "b"));
  factors.push_back(instrument("W1", {"w10", "w1fail", "w1ok"}, "w1"));
  factors.push_back(instrument("W2", {"w20", "w2fail", "w2ok"}, "w2"));
  m.space = std::make_shared<CompositeSpace>(std::move(factors));
  const CompositeSpace& space = *m.space;

  const Eigen::Index dC = space.factor(0).dim, dF1 = space.factor(1).dim,
                     dq = space.factor(2).dim, dF2 = space.factor(3).dim,
                     dW1 = space.factor(4).dim, dW2 = space.factor(5).dim;

  const Vector e_h = unit(dC, 0), e_t = unit(dC, 1);
  const Vector e_a0 = unit(dF1, 0), e_ah = unit(dF1, 1), e_at = unit(dF1, 2);
  const Vector e_down = unit(dq, 0), e_up = unit(dq, 1);
  const Vector e_b0 = unit(dF2, 0), e_bdown = unit(dF2, 1), e_bup = unit(dF2, 2);
  const Vector e_w10 = unit(dW1, 0), e_w1fail = unit(dW1, 1), e_w1ok = unit(dW1, 2);
  const Vector e_w20 = unit(dW2, 0), e_w2fail = unit(dW2, 1), e_w2ok = unit(dW2, 2);

  const double r13 = std::sqrt(1.0 / 3.0), r23 = std::sqrt(2.0 / 3.0);
  const double r12 = std::sqrt(1.0 / 2.0);

  const Vector phi = r13 * e_h + r23 * e_t;
  const Vector q0 = e_down;
  const Vector H = kron(e_h, e_ah), T = kron(e_t, e_at);
  const Vector Down = kron(e_down, e_bdown), Up = kron(e_up, e_bup);
  const Vector right = r12 * e_down + r12 * e_up;
  const Vector failX = r12 * H + r12 * T, okX = r12 * H - r12 * T;
  const Vector failY = r12 * Down + r12 * Up, okY = r12 * Down - r12 * Up;

  m.states.push_back({"phi", local({0}, phi)});
  m.states.push_back({"q0", local({2}, q0)});
  m.states.push_back({"H", local({0, 1}, H)});
  m.states.push_back({"T", local({0, 1}, T)});
  m.states.push_back({"Down", local({2, 3}, Down)});
  m.states.push_back({"Up", local({2, 3}, Up)});
  m.states.push_back({"right", local({2}, right)});
  m.states.push_back({"failX", local({0, 1}, failX)});
  m.states.push_back({"okX", local({0, 1}, okX)});
  m.states.push_back({"failY", local({2, 3}, failY)});
  m.states.push_back({"okY", local({2, 3}, okY)});

  m.initial = kron(kron(kron(kron(kron(phi, e_a0), q0), e_b0), e_w10), e_w20);

  m.schedule = std::make_shared<UnitarySchedule>(
      m.space, TimeGrid({"t0", "t1", "t2", "t3", "t4", "t5"}));

  auto add_interval = [&](std::string from, std::string to,
                          std::vector<std::string> on,
                          std::vector<IsometryPair> pairs) {
    m.schedule->add_step(from, to, on, pairs);
    m.intervals.push_back(
        IntervalDecl{std::move(from), std::move(to), std::move(on),
                     std::move(pairs)});
  };

  // The friend F1 measures the coin, then prepares the qubit conditional on
  // her pointer; the friend F2 measures the qubit; the outside observers W1
  // and W2 measure each laboratory in its ok/fail basis.
  add_interval("t0", "t1", {"C", "F1"},
               {{kron(e_h, e_a0), kron(e_h, e_ah)},
                {kron(e_t, e_a0), kron(e_t, e_at)}});
  add_interval("t1", "t2", {"F1", "q"},
               {{kron(e_ah, q0), kron(e_ah, e_down)},
                {kron(e_at, q0), kron(e_at, right)}});
  add_interval("t2", "t3", {"q", "F2"},
               {{kron(e_down, e_b0), kron(e_down, e_bdown)},
                {kron(e_up, e_b0), kron(e_up, e_bup)}});
  add_interval("t3", "t4", {"C", "F1", "W1"},
               {{kron(failX, e_w10), kron(failX, e_w1fail)},
                {kron(okX, e_w10), kron(okX, e_w1ok)}});
  add_interval("t4", "t5", {"q", "F2", "W2"},
               {{kron(okY, e_w20), kron(okY, e_w2ok)},
                {kron(failY, e_w20), kron(failY, e_w2fail)}});

  auto add_context = [&](std::string name, std::string time,
                         std::vector<Context::PointerEntry> entries,
                         std::string rest_name) {
    ContextDecl decl{name, time, entries, rest_name};
    m.contexts.emplace(name, std::make_shared<Context>(
                                 Context::from_pointer_labels(
                                     m.space, name, time, entries, rest_name)));
    m.context_decls.push_back(std::move(decl));
  };

  add_context("OutcomeF1", "t1",
              {{"a_h", "F1", "a_h"}, {"a_t", "F1", "a_t"}}, "neither_a");
  add_context("OutcomeF2", "t3",
              {{"b_down", "F2", "b_down"}, {"b_up", "F2", "b_up"}}, "neither_b");
  add_context("OutcomeW1", "t4",
              {{"w1ok", "W1", "w1ok"}, {"w1fail", "W1", "w1fail"}}, "neither_w1");
  add_context("OutcomeW2", "t5",
              {{"w2ok", "W2", "w2ok"}, {"w2fail", "W2", "w2fail"}}, "neither_w2");

  auto add_family = [&](std::string name, std::vector<std::string> contexts) {
    std::vector<ContextPtr> ptrs;
    for (const std::string& c : contexts) ptrs.push_back(m.contexts.at(c));
    m.families.emplace(name,
                       Family::create(name, ptrs, m.schedule->grid()));
    m.family_decls.push_back(FamilyDecl{std::move(name), std::move(contexts)});
  };

  add_family("F45", {"OutcomeW1", "OutcomeW2"});
  add_family("F34", {"OutcomeF2", "OutcomeW1"});
  add_family("F13", {"OutcomeF1", "OutcomeF2"});
  add_family("F15", {"OutcomeF1", "OutcomeW2"});
  add_family("Fcoin", {"OutcomeF1"});
  add_family("F1345", {"OutcomeF1", "OutcomeF2", "OutcomeW1", "OutcomeW2"});

  const double r112 = std::sqrt(1.0 / 12.0);
  auto pattern = [&](const Vector& lab1, const Vector& lab2) {
    return kron(kron(kron(lab1, lab2), e_w10), e_w20);
  };

  m.queries.push_back(make_amplitude("H (x) Down (x) |w10> (x) |w20>",
                                     pattern(H, Down), "t3", r13));
  m.queries.push_back(make_amplitude("T (x) failY (x) |w10> (x) |w20>",
                                     pattern(T, failY), "t3", r23));
  m.queries.push_back(make_amplitude("okX (x) okY (x) |w10> (x) |w20>",
                                     pattern(okX, okY), "t3", r112));
  m.queries.push_back(make_amplitude("okX (x) failY (x) |w10> (x) |w20>",
                                     pattern(okX, failY), "t3", -r112));
  m.queries.push_back(make_amplitude("failX (x) okY (x) |w10> (x) |w20>",
                                     pattern(failX, okY), "t3", r112));
  m.queries.push_back(make_amplitude("failX (x) failY (x) |w10> (x) |w20>",
                                     pattern(failX, failY), "t3",
                                     std::sqrt(3.0 / 4.0)));

  m.queries.push_back(make_consistency("F45", true));
  m.queries.push_back(make_prob("F45", {{"w1ok", "t4"}, {"w2ok", "t5"}},
                                1.0 / 12.0));
  m.queries.push_back(make_prob("F45", {{"w1fail", "t4"}, {"w2fail", "t5"}},
                                3.0 / 4.0));

  m.queries.push_back(make_consistency("F34", true));
  m.queries.push_back(
      make_condprob("F34", {"b_up", "t3"}, {"w1ok", "t4"}, 1.0));
  m.queries.push_back(make_consistency("F13", true));
  m.queries.push_back(
      make_condprob("F13", {"a_t", "t1"}, {"b_up", "t3"}, 1.0));
  m.queries.push_back(make_consistency("F15", true));
  m.queries.push_back(
      make_condprob("F15", {"w2fail", "t5"}, {"a_t", "t1"}, 1.0));

  m.queries.push_back(make_prob("Fcoin", {{"a_t", "t1"}}, 2.0 / 3.0));
  m.queries.push_back(make_consistency("F1345", false));

  return m;
}

double fr_first_part(const ScenarioModel& model) {
  FamilyAnalysis analysis(model.families.at("F45"), *model.schedule,
                          model.initial);
  History h = history_and(
      History::event(analysis.family(), "t4", "w1ok"),
      History::event(analysis.family(), "t5", "w2ok"));
  return analysis.probability(h);
}

std::array<double, 3> fr_conditionals(const ScenarioModel& model) {
  auto cond = [&](const std::string& family, const Event& target,
                  const Event& given) {
    FamilyAnalysis analysis(model.families.at(family), *model.schedule,
                            model.initial);
    return analysis.conditional(
        History::event(analysis.family(), target.time, target.projector),
        History::event(analysis.family(), given.time, given.projector));
  };
  return {cond("F34", {"b_up", "t3"}, {"w1ok", "t4"}),
          cond("F13", {"a_t", "t1"}, {"b_up", "t3"}),
          cond("F15", {"w2fail", "t5"}, {"a_t", "t1"})};
}

DecoherenceReport fr_four_time(const ScenarioModel& model) {
  return FamilyAnalysis(model.families.at("F1345"), *model.schedule,
                        model.initial)
      .report();
}

Report fr_report(const ScenarioModel& model, const RunOptions& options) {
  return run(model, options);
}

}  // namespace histq
