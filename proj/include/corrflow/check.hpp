#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "corrflow/io.hpp"
#include "corrflow/scenario.hpp"

namespace corrflow {

// Runs one prepared scenario and evaluates every applicable gate: norm drift,
// linear correlation law, conserved mean_h, raw variance law, monotonicity of
// mean_c (free mode), Heisenberg and Schrodinger-Robertson floors, momentum
// density invariance (free mode), leak flags, waist identity, and the
// opt-in non-monotonicity witness for potential scenarios.
ScenarioReport check_scenario(const PreparedScenario& prepared);

// Parses and checks every file; writes the JSON report; returns 0 iff every
// gate of every scenario passed. Parse and guard failures are reported per
// scenario without aborting the rest.
int run_check_suite(std::span<const std::string> files, std::ostream& report_sink, std::ostream& log);

}  // namespace corrflow
