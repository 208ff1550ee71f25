#pragma once

#include <string>
#include <vector>

#include "corrflow/observables.hpp"

namespace corrflow {

struct Schedule {
    double t_end = 1.0;
    int n_samples = 11;  // uniform in time, first sample at t = 0

    void validate() const;
    double dt() const { return t_end / static_cast<double>(n_samples - 1); }
    double time_at(int i) const { return t_end * static_cast<double>(i) / static_cast<double>(n_samples - 1); }
};

/// Sampled moment trajectory. Times strictly increase and start at zero.
struct TimeSeries {
    std::string provenance;
    std::vector<MomentSet> samples;

    void validate() const;
};

enum class EvolutionMode { Free, Potential };

// Exact free propagation: psi_k -> e^{-i hbar k^2 t / 2m} psi_k. No time-step
// error; the only precondition is that the predicted spread stays inside the
// box (PredictedLeakError names the required domain size otherwise).
WaveFunction free_propagate(const WaveFunction& psi, double t, const PhysicalConstants& consts);

// V = 1/2 m omega^2 x^2 sampled on the grid.
std::vector<double> harmonic_potential(const Grid& grid, const PhysicalConstants& consts, double omega);

// Linear interpolation of a sampled (x, V) table onto the grid. Outside the
// table range the end values extend flat.
std::vector<double> potential_from_table(const Grid& grid, std::span<const double> xs,
                                         std::span<const double> vs);

// dx * sum V(x) |psi|^2 — potential part of <H> for the split-step checks.
double potential_expectation(const WaveFunction& psi, std::span<const double> potential);

// Strang splitting exp(-iV dt/2h) exp(-iT dt/h) exp(-iV dt/2h) per step;
// second order in dt, unitary to rounding. Guards are evaluated per sample by
// the trajectory runner, not here.
WaveFunction split_step_propagate(const WaveFunction& psi, std::span<const double> potential, double dt,
                                  int steps, const PhysicalConstants& consts);

/// Trajectory runner. Free mode jumps from t = 0 directly to each sample time
/// (the propagator is diagonal, so there is no accumulated stepping error);
/// potential mode steps sequentially with dt chosen to divide the sample
/// spacing near dt_target. Guard flags are attached per sample.
TimeSeries run_trajectory(const WaveFunction& psi0, const Schedule& schedule, EvolutionMode mode,
                          const PhysicalConstants& consts, std::span<const double> potential = {},
                          double dt_target = 1e-3, const GuardThresholds& thresholds = {},
                          std::string provenance = {});

}  // namespace corrflow
