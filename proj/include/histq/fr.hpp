#pragma once

#include <array>

#include "histq/scenario.hpp"

// Built-in model of the Frauchiger-Renner Gedankenexperiment: two friends
// measure a biased quantum coin and a qubit inside isolated laboratories, two
// outside observers then measure the laboratories in rotated bases. Every
// process is a pointer-recording unitary on the 324-dimensional product of
// coin, qubit and four instrument factors; the standard analyses run as
// history queries.

namespace histq {

// Programmatic construction. `extra_instrument_levels` appends unused pointer
// levels to the four instrument factors; all query results are provably
// independent of the instrument dimension as long as it is at least 3.
ScenarioModel build_fr(int extra_instrument_levels = 0);

// Joint probability of both outside observers reading "ok", evaluated in the
// two-time family over their pointer contexts (checked consistent). 1/12.
double fr_first_part(const ScenarioModel& model);

// The three certainty inferences, each in its own consistent two-time family:
// Pr(b_up@t3 | w1ok@t4), Pr(a_t@t1 | b_up@t3), Pr(w2fail@t5 | a_t@t1).
// All equal to 1.
std::array<double, 3> fr_conditionals(const ScenarioModel& model);

// Decoherence functional of the four-time family combining all four
// instrument contexts. Fails the consistency condition with interference
// magnitude 1/12, so probability queries on it are rejected by default.
DecoherenceReport fr_four_time(const ScenarioModel& model);

// Runs the full built-in query list (identical to the shipped fr.hq).
Report fr_report(const ScenarioModel& model, const RunOptions& options = {});

}  // namespace histq
