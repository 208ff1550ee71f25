#include "corrflow/check.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "corrflow/errors.hpp"
#include "corrflow/oracle.hpp"

namespace corrflow {

namespace {

GateResult gate(std::string name, double max_residual, double tolerance) {
    return GateResult{std::move(name), max_residual, tolerance, max_residual <= tolerance};
}

TimeSeries run_prepared(const PreparedScenario& p) {
    return run_trajectory(p.psi0, p.schedule, p.mode, p.consts, p.potential, p.dt_target,
                          p.tolerances.guards(), p.name);
}

}  // namespace

ScenarioReport check_scenario(const PreparedScenario& p) {
    ScenarioReport report;
    report.scenario = p.name;

    TimeSeries series;
    try {
        series = run_prepared(p);
    } catch (const std::exception& e) {
        report.pass = false;
        report.errors.emplace_back(e.what());
        return report;
    }
    const auto& s = series.samples;
    const double hbar2_4 = 0.25 * p.consts.hbar * p.consts.hbar;

    // Norm drift along the trajectory. The sampled moments are norm-corrected,
    // so track the raw norm separately.
    {
        double max_drift = 0.0;
        if (p.mode == EvolutionMode::Free) {
            for (int i = 0; i < p.schedule.n_samples; ++i) {
                const WaveFunction psi_t =
                    free_propagate(p.psi0, p.schedule.time_at(i), p.consts);
                max_drift = std::max(max_drift, std::abs(psi_t.norm() - 1.0));
            }
        } else {
            const double seg = p.schedule.dt();
            const int steps = std::max(1, static_cast<int>(std::llround(seg / p.dt_target)));
            WaveFunction psi = p.psi0;
            for (int i = 1; i < p.schedule.n_samples; ++i) {
                psi = split_step_propagate(psi, p.potential, seg / steps, steps, p.consts);
                max_drift = std::max(max_drift, std::abs(psi.norm() - 1.0));
            }
        }
        report.gates.push_back(gate("norm_drift", max_drift, p.tolerances.norm_drift));
    }

    // Guard flags are data on each sample, but a clean scenario must not trip
    // them; a leak here is the undersized-grid diagnosis.
    {
        unsigned flags = 0;
        for (const MomentSet& m : s) flags |= m.guard_flags;
        GateResult g{"guards_clean", static_cast<double>(flags), 0.0, flags == 0};
        if (!g.pass) {
            std::ostringstream os;
            os << "guard flags tripped along the trajectory:";
            if (flags & guard_leak) os << " leak(boundary mass over " << p.tolerances.leak << ")";
            if (flags & guard_nyquist) os << " nyquist";
            report.errors.push_back(os.str());
        }
        report.gates.push_back(g);
    }

    if (p.mode == EvolutionMode::Free) {
        const oracle::MomentLaw law = oracle::law_from_moments(s.front(), p.consts);

        double corr_resid = 0.0, x2_resid = 0.0, h_drift = 0.0, dens_drift = 0.0;
        double min_delta_c = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            corr_resid = std::max(corr_resid,
                                  std::abs(s[i].mean_c - oracle::correlation_at(law, s[i].time)));
            x2_resid = std::max(x2_resid, std::abs(s[i].mean_x2 - oracle::x2_at(law, s[i].time)));
            h_drift = std::max(h_drift, std::abs(s[i].mean_h - s.front().mean_h));
            if (i > 0) min_delta_c = std::min(min_delta_c, s[i].mean_c - s[i - 1].mean_c);
        }
        report.gates.push_back(gate("linear_correlation_law", corr_resid, p.tolerances.residual));
        report.gates.push_back(gate("variance_law", x2_resid, 10.0 * p.tolerances.residual));
        report.gates.push_back(gate("mean_h_drift", h_drift, p.tolerances.norm_drift));
        report.gates.push_back(
            gate("monotonicity", std::max(0.0, -min_delta_c), p.tolerances.monotonicity));

        // Momentum density must not move at all under free evolution.
        {
            const auto d0 = momentum_density(p.psi0);
            for (const double t : {0.5 * p.schedule.t_end, p.schedule.t_end}) {
                const auto dt_density =
                    momentum_density(free_propagate(p.psi0, t, p.consts));
                for (std::size_t j = 0; j < d0.size(); ++j) {
                    dens_drift = std::max(dens_drift, std::abs(dt_density[j] - d0[j]));
                }
            }
            report.gates.push_back(
                gate("momentum_density_invariance", dens_drift, p.tolerances.density_drift));
        }

        // Waist identity when the state genuinely contracts and the waist lies
        // inside the sampled window: the zero of raw <C> is the minimizer of
        // raw <X^2>, an exact identity. A waist closer to t = 0 than one
        // sample spacing is indistinguishable from "already expanding" (cat
        // states compute c0 = 0 up to rounding), so it is not gated.
        const double spacing = p.schedule.dt();
        const oracle::WaistResult waist = oracle::waist_time(law);
        if (!waist.already_expanding && waist.t_star > spacing && waist.t_star <= p.schedule.t_end) {
            report.t_star_oracle = waist.t_star;
            std::size_t i_min = 0;
            for (std::size_t i = 1; i < s.size(); ++i) {
                if (s[i].mean_x2 < s[i_min].mean_x2) i_min = i;
            }
            report.t_star_simulated = s[i_min].time;
            const double waist_err = std::abs(s[i_min].time - waist.t_star);

            double cross_err = 0.0;
            std::size_t i_cross = 0;
            while (i_cross < s.size() && s[i_cross].mean_c < 0.0) ++i_cross;
            if (i_cross == s.size()) {
                cross_err = p.schedule.t_end;  // no crossing found: fail loudly
            } else {
                cross_err = std::abs(s[i_cross].time - waist.t_star);
            }
            report.gates.push_back(
                gate("waist_time_identity", std::max(waist_err, cross_err), spacing * (1.0 + 1e-9)));

            // Heisenberg saturation at the waist: pure Gaussians only (other
            // states pass through their waist above the floor), and only when
            // a sample lands on t*.
            if (p.gaussian_state) {
                for (const MomentSet& m : s) {
                    if (std::abs(m.time - waist.t_star) < 1e-9 * std::max(1.0, p.schedule.t_end)) {
                        report.gates.push_back(gate("waist_uncertainty_saturation",
                                                    std::abs(m.var_x * m.var_p - hbar2_4), 1e-7));
                        break;
                    }
                }
            }
        }
    } else {
        report.gates.push_back(GateResult{"monotonicity: not applicable (potential mode)", 0.0, 0.0, true});
        if (p.expect_decrease) {
            double max_drop = 0.0;
            for (std::size_t i = 1; i < s.size(); ++i) {
                max_drop = std::max(max_drop, s[i - 1].mean_c - s[i].mean_c);
            }
            // Witness: the monotone growth is free-particle-specific, so this
            // must show a genuine decrease.
            GateResult g{"nonmonotone_witness", max_drop, 1e-3, max_drop > 1e-3};
            report.gates.push_back(g);
        }
    }

    // Uncertainty floors at every sample, both the plain product and the
    // covariance-corrected form.
    {
        double floor_viol = 0.0, robertson_viol = 0.0;
        for (const MomentSet& m : s) {
            floor_viol = std::max(floor_viol, hbar2_4 * (1.0 - 1e-9) - m.var_x * m.var_p);
            robertson_viol = std::max(
                robertson_viol, hbar2_4 * (1.0 - 1e-9) - (m.var_x * m.var_p - m.cov_xp * m.cov_xp));
        }
        report.gates.push_back(gate("uncertainty_floor", std::max(0.0, floor_viol), 0.0));
        report.gates.push_back(gate("schrodinger_robertson_floor", std::max(0.0, robertson_viol), 0.0));
    }

    report.pass = std::all_of(report.gates.begin(), report.gates.end(),
                              [](const GateResult& g) { return g.pass; });
    return report;
}

int run_check_suite(std::span<const std::string> files, std::ostream& report_sink, std::ostream& log) {
    std::vector<ScenarioReport> reports;
    std::set<std::string> seen_names;
    bool all_pass = true;

    for (const std::string& path : files) {
        ScenarioReport report;
        report.scenario = path;
        std::ifstream in(path);
        if (!in) {
            report.pass = false;
            report.errors.push_back("cannot open scenario file");
            all_pass = false;
            reports.push_back(std::move(report));
            continue;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        const ScenarioParseResult parsed = parse_scenario(buffer.str());
        if (!parsed.ok()) {
            report.pass = false;
            for (const ParseIssue& issue : parsed.errors) {
                report.errors.push_back(path + ":" + std::to_string(issue.line) + ": " + issue.message);
            }
            all_pass = false;
            reports.push_back(std::move(report));
            continue;
        }
        const Scenario& sc = *parsed.scenario;
        if (!seen_names.insert(sc.name).second) {
            report.scenario = sc.name;
            report.pass = false;
            report.errors.push_back("duplicate scenario name '" + sc.name + "'");
            all_pass = false;
            reports.push_back(std::move(report));
            continue;
        }
        try {
            report = check_scenario(prepare(sc));
        } catch (const std::exception& e) {
            report.scenario = sc.name;
            report.pass = false;
            report.errors.emplace_back(e.what());
        }
        all_pass = all_pass && report.pass;
        reports.push_back(std::move(report));
    }

    write_check_report(reports, report_sink);
    for (const ScenarioReport& r : reports) {
        log << (r.pass ? "PASS " : "FAIL ") << r.scenario << '\n';
        for (const std::string& e : r.errors) log << "  " << e << '\n';
    }
    return all_pass ? 0 : 1;
}

}  // namespace corrflow
