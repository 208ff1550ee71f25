#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corrflow/evolution.hpp"

namespace corrflow {

// Fixed-order CSV with header
//   time,mean_x,mean_p,var_x,var_p,mean_x2,mean_c,cov_xp,mean_h,guard_flags
// one row per sample, 17 significant digits, '.' decimal separator, '\n'
// endings. Byte-identical across runs for identical scenarios.
void emit_timeseries_csv(const TimeSeries& series, std::ostream& sink);

// One double at full round-trip precision, locale-independent.
std::string format_double(double v);

struct GateResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct ScenarioReport {
    std::string scenario;
    bool pass = true;
    std::vector<GateResult> gates;
    std::optional<double> t_star_oracle;
    std::optional<double> t_star_simulated;
    std::vector<std::string> errors;  // validation / guard failures
};

// JSON array of {scenario, pass, gates: [{name, max_residual, tolerance,
// pass}], t_star: {oracle, simulated}} objects, field order fixed.
void write_check_report(const std::vector<ScenarioReport>& reports, std::ostream& sink);

}  // namespace corrflow
