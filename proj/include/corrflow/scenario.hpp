#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrflow/evolution.hpp"
#include "corrflow/states.hpp"

namespace corrflow {

/// Tolerances with the engine defaults. `residual` is the engine-vs-oracle
/// gate on the correlation law; the variance-law gate runs at 10x residual.
/// CORRFLOW_DEFAULT_TOL overrides the residual default when the scenario file
/// does not set it explicitly.
struct ToleranceSet {
    double leak = 1e-12;
    double nyquist = 1e-10;
    double residual = 1e-8;
    double monotonicity = 1e-9;
    double norm_drift = 1e-10;
    double density_drift = 1e-12;

    GuardThresholds guards() const { return GuardThresholds{leak, nyquist}; }
};

struct StateSpec {
    enum class Kind { Gaussian, Superposition, RandomBandLimited };
    Kind kind = Kind::Gaussian;
    std::vector<GaussianSpec> components;  // one entry for Gaussian
    std::vector<cdouble> weights;          // superposition only
    RandomStateParams random{};            // random only
};

struct ModeSpec {
    enum class Kind { Free, Harmonic, CustomTable };
    Kind kind = Kind::Free;
    double omega = 1.0;         // harmonic
    std::string table_path;     // custom
    double dt_target = 1e-3;    // split-step target step
};

struct GridChoice {
    bool auto_bounds = true;
    std::size_t n = 2048;
    bool n_explicit = false;
    double x_min = 0.0;
    double x_max = 0.0;
};

struct Scenario {
    std::string name;
    PhysicalConstants constants{};
    GridChoice grid{};
    StateSpec state{};
    ModeSpec mode{};
    Schedule schedule{};
    ToleranceSet tolerances{};
    std::uint64_t seed = 1;
    bool expect_decrease = false;  // potential-mode non-monotonicity witness
};

struct ParseIssue {
    int line = 0;  // 0 when no single line applies
    std::string message;
};

struct ScenarioParseResult {
    std::optional<Scenario> scenario;
    std::vector<ParseIssue> errors;
    bool ok() const { return scenario.has_value() && errors.empty(); }
};

// Parses the flat key=value scenario format ('#' comments, [section] headers).
// Collects every validation error with its line number instead of stopping at
// the first.
ScenarioParseResult parse_scenario(std::string_view text);

// Reads CORRFLOW_DEFAULT_TOL; ConfigError if set to a non-positive or
// non-numeric value.
std::optional<double> env_default_residual_tolerance();

/// Scenario materialized into engine objects.
struct PreparedScenario {
    std::string name;
    PhysicalConstants consts;
    Grid grid;
    WaveFunction psi0;
    EvolutionMode mode;
    std::vector<double> potential;  // empty in free mode
    double dt_target;
    Schedule schedule;
    ToleranceSet tolerances;
    bool expect_decrease;
    bool gaussian_state;  // single pure Gaussian (waist saturation applies)
};

// Builds grid (auto-sizing from Gaussian envelopes when requested), initial
// state, and potential. Throws the usual guard/config errors.
PreparedScenario prepare(const Scenario& sc);

std::vector<double> parse_potential_table_file(const std::string& path, const Grid& grid);

}  // namespace corrflow
