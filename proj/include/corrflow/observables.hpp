#pragma once

#include <vector>

#include "corrflow/grid.hpp"

namespace corrflow {

/// Every expectation value the engine tracks at one instant. var_* are the
/// centered second moments; mean_x2 = <X^2> is also kept raw so both the
/// centered and the raw spreading laws are checkable. mean_c is the
/// correlation <(XP+PX)/2>; cov_xp = mean_c - mean_x*mean_p.
struct MomentSet {
    double time = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
    double mean_x2 = 0.0;
    double mean_c = 0.0;
    double cov_xp = 0.0;
    double mean_h = 0.0;  // <P^2> / 2m
    unsigned guard_flags = 0;
};

// Position moments by position-space quadrature, momentum moments by
// momentum-space quadrature, mean_c = Re <psi | X (P psi)> with spectral P.
// Guard violations surface as flags on the result, never as silent acceptance.
MomentSet moments(const WaveFunction& psi, const PhysicalConstants& consts, double t,
                  const GuardThresholds& thresholds = {});

// |psi_k|^2 scaled so the dk-weighted sum is one; bins ordered like k_values().
std::vector<double> momentum_density(const WaveFunction& psi);

// P psi, X psi, C psi with P applied spectrally and C = (X P + P X)/2.
std::vector<cdouble> apply_momentum(const WaveFunction& psi, const PhysicalConstants& consts);
std::vector<cdouble> apply_position(const WaveFunction& psi);
std::vector<cdouble> apply_correlation(const WaveFunction& psi, const PhysicalConstants& consts);

// Applied-operator residuals of the canonical commutation relations on a
// band-limited interior state. Finite lattice X and P cannot satisfy the
// relations as matrices; the testable statement is the residual on guarded
// states, converging to zero under grid refinement. Throws NyquistError /
// LeakError when the state fails its guards.
double commutator_residual_xp(const WaveFunction& psi, const PhysicalConstants& consts,
                              const GuardThresholds& thresholds = {});
// ||[X,C] psi - i hbar X psi|| / ||X psi||
double commutator_residual_xc(const WaveFunction& psi, const PhysicalConstants& consts,
                              const GuardThresholds& thresholds = {});
// ||[P,C] psi + i hbar P psi|| / ||P psi||
double commutator_residual_pc(const WaveFunction& psi, const PhysicalConstants& consts,
                              const GuardThresholds& thresholds = {});

}  // namespace corrflow
