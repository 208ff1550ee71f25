#include "corrflow/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>

#include "corrflow/errors.hpp"
#include "corrflow/io.hpp"
#include "corrflow/oracle.hpp"

namespace corrflow {

namespace {

std::optional<std::vector<double>> parse_range(const std::string& value, std::string& error) {
    // lo:hi:count or a single number.
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto colon = value.find(':', pos);
        parts.push_back(value.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    auto as_double = [&](const std::string& s, double& out) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
    };
    if (parts.size() == 1) {
        double v{};
        if (!as_double(parts[0], v)) {
            error = "expected a number or lo:hi:count range, got '" + value + "'";
            return std::nullopt;
        }
        return std::vector<double>{v};
    }
    if (parts.size() != 3) {
        error = "expected lo:hi:count, got '" + value + "'";
        return std::nullopt;
    }
    double lo{}, hi{};
    std::uint64_t count{};
    auto [p, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
    if (!as_double(parts[0], lo) || !as_double(parts[1], hi) || ec != std::errc{} ||
        p != parts[2].data() + parts[2].size() || count < 1 || count > 100000) {
        error = "expected lo:hi:count with count in [1, 100000], got '" + value + "'";
        return std::nullopt;
    }
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
    } else {
        for (std::uint64_t i = 0; i < count; ++i) {
            out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
    }
    return out;
}

SweepPoint run_point(const FamilySpec& f, std::size_t index, double sigma, double chirp, double p0) {
    SweepPoint point;
    point.sigma = sigma;
    point.chirp = chirp;
    point.p0 = p0;
    {
        std::ostringstream os;
        os << f.name << "_" << index;
        point.name = os.str();
    }
    try {
        Scenario sc;
        sc.name = point.name;
        sc.constants = f.constants;
        sc.grid = f.grid;
        sc.state.kind = StateSpec::Kind::Gaussian;
        sc.state.components = {GaussianSpec{0.0, p0, sigma, chirp}};
        sc.mode.kind = ModeSpec::Kind::Free;
        sc.schedule = f.schedule;
        sc.tolerances = f.tolerances;

        const PreparedScenario prepared = prepare(sc);
        const TimeSeries series =
            run_trajectory(prepared.psi0, prepared.schedule, prepared.mode, prepared.consts, {},
                           prepared.dt_target, prepared.tolerances.guards(), prepared.name);
        const auto& s = series.samples;
        for (const MomentSet& m : s) {
            if (m.guard_flags != 0) {
                std::ostringstream os;
                os << "guard flags tripped at t=" << m.time << ":";
                if (m.guard_flags & guard_leak) os << " leak";
                if (m.guard_flags & guard_nyquist) os << " nyquist";
                throw LeakError(os.str());
            }
        }

        const oracle::MomentLaw law = oracle::law_from_moments(s.front(), f.constants);
        point.min_delta_c = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s.size(); ++i) {
            point.max_corr_residual = std::max(
                point.max_corr_residual, std::abs(s[i].mean_c - oracle::correlation_at(law, s[i].time)));
            point.max_x2_residual =
                std::max(point.max_x2_residual, std::abs(s[i].mean_x2 - oracle::x2_at(law, s[i].time)));
            if (i > 0) {
                const double delta = s[i].mean_c - s[i - 1].mean_c;
                point.min_delta_c = std::min(point.min_delta_c, delta);
                if (delta < -f.tolerances.monotonicity) ++point.violations;
            }
        }
        point.min_slope = point.min_delta_c / f.schedule.dt();
    } catch (const std::exception& e) {
        point.skipped = true;
        point.skip_reason = e.what();
        point.min_delta_c = 0.0;
        point.min_slope = 0.0;
    }
    return point;
}

}  // namespace

FamilyParseResult parse_family(std::string_view text) {
    FamilyParseResult result;

    // Reuse the scenario reader for the shared sections by parsing a scenario
    // with a placeholder state, then pull the [family] ranges off the raw text.
    std::string augmented(text);
    augmented += "\n[state]\ntype = gaussian\nsigma = 1\n";
    std::string family_lines;
    {
        std::istringstream is(augmented);
        std::string line;
        bool in_family = false;
        std::ostringstream rest;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            std::string stripped = line;
            const auto hash = stripped.find('#');
            if (hash != std::string::npos) stripped.resize(hash);
            const auto first = stripped.find_first_not_of(" \t\r");
            const bool header = first != std::string::npos && stripped[first] == '[';
            if (header) {
                std::string name = stripped.substr(first);
                in_family = name.starts_with("[family]");
                if (in_family) {
                    rest << '\n';
                    continue;
                }
            }
            if (in_family && !header) {
                family_lines += std::to_string(lineno) + " " + stripped + "\n";
                rest << '\n';
            } else {
                rest << line << '\n';
            }
        }
        augmented = rest.str();
    }

    const ScenarioParseResult base = parse_scenario(augmented);
    result.errors = base.errors;
    FamilySpec family;
    if (base.scenario) {
        family.name = base.scenario->name;
        family.constants = base.scenario->constants;
        family.grid = base.scenario->grid;
        family.schedule = base.scenario->schedule;
        family.tolerances = base.scenario->tolerances;
    }

    bool saw_sigma = false, saw_chirp = false, saw_p0 = false;
    std::istringstream fam(family_lines);
    std::string entry;
    while (std::getline(fam, entry)) {
        if (entry.empty()) continue;
        std::istringstream es(entry);
        int lineno = 0;
        es >> lineno;
        std::string body;
        std::getline(es, body);
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            result.errors.push_back({lineno, "expected key = value in [family]"});
            continue;
        }
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string key = strip(body.substr(0, eq));
        const std::string value = strip(body.substr(eq + 1));
        std::string error;
        const auto range = parse_range(value, error);
        if (!range) {
            result.errors.push_back({lineno, error});
            continue;
        }
        if (key == "sigma") {
            for (double v : *range) {
                if (!(v > 0.0)) result.errors.push_back({lineno, "sigma values must be > 0"});
            }
            family.sigmas = *range;
            saw_sigma = true;
        } else if (key == "chirp") {
            family.chirps = *range;
            saw_chirp = true;
        } else if (key == "p0") {
            family.p0s = *range;
            saw_p0 = true;
        } else {
            result.errors.push_back({lineno, "unknown key '" + key + "' in [family]"});
        }
    }
    if (!saw_sigma) result.errors.push_back({0, "missing 'sigma' range in [family]"});
    if (!saw_chirp) family.chirps = {0.0};
    if (!saw_p0) family.p0s = {0.0};

    std::stable_sort(result.errors.begin(), result.errors.end(),
                     [](const ParseIssue& a, const ParseIssue& b) { return a.line < b.line; });
    if (result.errors.empty()) result.family = std::move(family);
    return result;
}

SweepSummary run_sweep(const FamilySpec& family, int jobs) {
    if (jobs < 1) throw ConfigError("sweep needs jobs >= 1");
    family.constants.validate();
    family.schedule.validate();
    if (family.sigmas.empty()) throw ConfigError("sweep family has no sigma values");

    struct Combo {
        double sigma, chirp, p0;
    };
    std::vector<Combo> combos;
    for (double s : family.sigmas)
        for (double b : family.chirps)
            for (double p : family.p0s) combos.push_back({s, b, p});

    SweepSummary summary;
    summary.family = family.name;
    summary.points.resize(combos.size());

    const auto t0 = std::chrono::steady_clock::now();
    const auto count = static_cast<std::int64_t>(combos.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
    for (std::int64_t i = 0; i < count; ++i) {
        const Combo& c = combos[static_cast<std::size_t>(i)];
        summary.points[static_cast<std::size_t>(i)] =
            run_point(family, static_cast<std::size_t>(i), c.sigma, c.chirp, c.p0);
    }
    const auto t1 = std::chrono::steady_clock::now();
    summary.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    summary.wall_seconds_per_point =
        combos.empty() ? 0.0 : summary.wall_seconds / static_cast<double>(combos.size());

    summary.global_min_delta_c = std::numeric_limits<double>::infinity();
    summary.global_min_slope = std::numeric_limits<double>::infinity();
    for (const SweepPoint& p : summary.points) {
        if (p.skipped) {
            ++summary.skipped;
            continue;
        }
        ++summary.completed;
        summary.violations += p.violations;
        summary.global_min_delta_c = std::min(summary.global_min_delta_c, p.min_delta_c);
        summary.global_min_slope = std::min(summary.global_min_slope, p.min_slope);
    }
    if (summary.completed == 0) {
        summary.global_min_delta_c = 0.0;
        summary.global_min_slope = 0.0;
    }
    return summary;
}

void emit_sweep_csv(const SweepSummary& summary, std::ostream& sink) {
    sink << "name,sigma,chirp,p0,status,min_delta_mean_c,min_slope,max_corr_residual,max_x2_residual,"
            "violations\n";
    for (const SweepPoint& p : summary.points) {
        std::string status = p.skipped ? "skipped: " + p.skip_reason : "ok";
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        sink << p.name << ',' << format_double(p.sigma) << ',' << format_double(p.chirp) << ','
             << format_double(p.p0) << ',' << status << ',' << format_double(p.min_delta_c) << ','
             << format_double(p.min_slope) << ',' << format_double(p.max_corr_residual) << ','
             << format_double(p.max_x2_residual) << ',' << p.violations << '\n';
    }
    if (!sink) throw ConfigError("sweep sink write failure");
}

void print_sweep_summary(const SweepSummary& summary, std::ostream& out) {
    out << "sweep " << summary.family << ": " << summary.completed << " trajectories, "
        << summary.skipped << " skipped, " << summary.violations << " monotonicity violations\n"
        << "  min consecutive delta <C> = " << format_double(summary.global_min_delta_c)
        << " (slope " << format_double(summary.global_min_slope) << ")\n"
        << "  wall time " << summary.wall_seconds << " s ("
        << summary.wall_seconds_per_point * 1e3 << " ms/trajectory)\n";
    for (const SweepPoint& p : summary.points) {
        if (p.skipped) {
            out << "  skipped " << p.name << " (sigma=" << p.sigma << ", chirp=" << p.chirp
                << ", p0=" << p.p0 << "): " << p.skip_reason << '\n';
        }
    }
}

}  // namespace corrflow
