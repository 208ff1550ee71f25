#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corrflow/scenario.hpp"

namespace corrflow {

/// Family of Gaussian initial states: the Cartesian product of the three
/// parameter ranges, one free trajectory per point.
struct FamilySpec {
    std::string name;
    std::vector<double> sigmas;
    std::vector<double> chirps;
    std::vector<double> p0s;
    PhysicalConstants constants{};
    GridChoice grid{};
    Schedule schedule{};
    ToleranceSet tolerances{};
};

struct FamilyParseResult {
    std::optional<FamilySpec> family;
    std::vector<ParseIssue> errors;
    bool ok() const { return family.has_value() && errors.empty(); }
};

// Family file format: the scenario sections plus [family] with
//   sigma = lo:hi:count   (inclusive linspace; a bare number means one value)
//   chirp = ...
//   p0 = ...
FamilyParseResult parse_family(std::string_view text);

struct SweepPoint {
    std::string name;
    double sigma = 0.0;
    double chirp = 0.0;
    double p0 = 0.0;
    bool skipped = false;
    std::string skip_reason;
    double min_delta_c = 0.0;      // min consecutive-sample change of mean_c
    double min_slope = 0.0;        // min_delta_c / sample spacing
    double max_corr_residual = 0.0;
    double max_x2_residual = 0.0;
    int violations = 0;            // consecutive decreases beyond tolerance
};

struct SweepSummary {
    std::string family;
    std::vector<SweepPoint> points;
    int completed = 0;
    int skipped = 0;
    int violations = 0;
    double global_min_delta_c = 0.0;
    double global_min_slope = 0.0;
    double wall_seconds = 0.0;          // not part of any deterministic output
    double wall_seconds_per_point = 0.0;
};

// Runs the family with `jobs` workers. Point results depend only on the
// scenario numbers, never on the worker count, so the CSV is byte-stable
// across --jobs settings.
SweepSummary run_sweep(const FamilySpec& family, int jobs);

// Deterministic per-point CSV (timings excluded).
void emit_sweep_csv(const SweepSummary& summary, std::ostream& sink);

// Human-readable summary including wall time; stdout only.
void print_sweep_summary(const SweepSummary& summary, std::ostream& out);

}  // namespace corrflow
