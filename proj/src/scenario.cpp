#include "corrflow/scenario.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "corrflow/errors.hpp"

namespace corrflow {

namespace {

struct Line {
    int number;
    std::string section;  // empty for top-level keys
    std::string key;
    std::string value;
};

std::string_view trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

/// Tokenized scenario text plus the error sink shared by all readers.
struct Reader {
    std::vector<Line> lines;
    std::map<std::string, int> section_lines;
    std::vector<ParseIssue>* errors;
    std::set<std::string> consumed;  // "section/key"

    void fail(int line, std::string message) const { errors->push_back({line, std::move(message)}); }

    const Line* find(const std::string& section, const std::string& key) const {
        for (const Line& l : lines) {
            if (l.section == section && l.key == key) return &l;
        }
        return nullptr;
    }

    void mark(const std::string& section, const std::string& key) {
        consumed.insert(section + "/" + key);
    }

    std::optional<double> number(const std::string& section, const std::string& key) {
        const Line* l = find(section, key);
        if (!l) return std::nullopt;
        mark(section, key);
        const char* first = l->value.data();
        const char* last = first + l->value.size();
        double v{};
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) {
            fail(l->number, "expected a number for '" + key + "', got '" + l->value + "'");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::uint64_t> integer(const std::string& section, const std::string& key) {
        const Line* l = find(section, key);
        if (!l) return std::nullopt;
        mark(section, key);
        const char* first = l->value.data();
        const char* last = first + l->value.size();
        std::uint64_t v{};
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) {
            fail(l->number, "expected a nonnegative integer for '" + key + "', got '" + l->value + "'");
            return std::nullopt;
        }
        return v;
    }

    std::optional<bool> boolean(const std::string& section, const std::string& key) {
        const Line* l = find(section, key);
        if (!l) return std::nullopt;
        mark(section, key);
        const std::string v = lower(l->value);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        fail(l->number, "expected true/false for '" + key + "', got '" + l->value + "'");
        return std::nullopt;
    }

    std::optional<std::string> text(const std::string& section, const std::string& key) {
        const Line* l = find(section, key);
        if (!l) return std::nullopt;
        mark(section, key);
        return l->value;
    }

    int line_of(const std::string& section, const std::string& key) const {
        const Line* l = find(section, key);
        return l ? l->number : section_line(section);
    }

    int section_line(const std::string& section) const {
        const auto it = section_lines.find(section);
        return it == section_lines.end() ? 0 : it->second;
    }

    void flag_unconsumed(const std::set<std::string>& known_sections) {
        for (const Line& l : lines) {
            if (!known_sections.contains(l.section)) continue;  // reported as unknown section already
            if (!consumed.contains(l.section + "/" + l.key)) {
                const std::string where = l.section.empty() ? "top level" : "[" + l.section + "]";
                fail(l.number, "unknown key '" + l.key + "' in " + where);
            }
        }
    }
};

Reader tokenize(std::string_view textv, std::vector<ParseIssue>& errors,
                const std::set<std::string>& known_sections) {
    Reader r;
    r.errors = &errors;
    std::string section;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= textv.size()) {
        const auto nl = textv.find('\n', pos);
        std::string_view raw =
            textv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? textv.size() + 1 : nl + 1;
        ++number;

        const auto hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                errors.push_back({number, "malformed section header '" + std::string(line) + "'"});
                continue;
            }
            section = lower(line.substr(1, line.size() - 2));
            if (!known_sections.contains(section)) {
                errors.push_back({number, "unknown section [" + section + "]"});
            }
            r.section_lines.emplace(section, number);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back({number, "expected key = value, got '" + std::string(line) + "'"});
            continue;
        }
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty() || value.empty()) {
            errors.push_back({number, "empty key or value in '" + std::string(line) + "'"});
            continue;
        }
        r.lines.push_back({number, section, key, value});
    }
    return r;
}

const std::set<std::string> scenario_sections = {"",          "constants", "grid",   "state",
                                                 "mode",      "schedule",  "tolerances", "checks"};

void read_constants(Reader& r, Scenario& sc) {
    if (auto v = r.number("constants", "hbar")) {
        if (*v > 0.0 && std::isfinite(*v)) sc.constants.hbar = *v;
        else r.fail(r.line_of("constants", "hbar"), "hbar must be finite and > 0");
    }
    if (auto v = r.number("constants", "mass")) {
        if (*v > 0.0 && std::isfinite(*v)) sc.constants.mass = *v;
        else r.fail(r.line_of("constants", "mass"), "mass must be finite and > 0");
    }
}

void read_grid(Reader& r, Scenario& sc) {
    if (auto v = r.integer("grid", "n")) {
        if (*v >= 8 && std::has_single_bit(*v)) {
            sc.grid.n = static_cast<std::size_t>(*v);
            sc.grid.n_explicit = true;
        } else {
            r.fail(r.line_of("grid", "n"), "grid n must be a power of two >= 8");
        }
    }
    const auto xmin = r.number("grid", "x_min");
    const auto xmax = r.number("grid", "x_max");
    const auto auto_flag = r.boolean("grid", "auto");
    if (xmin && xmax) {
        if (!(*xmax > *xmin)) {
            r.fail(r.line_of("grid", "x_max"), "grid needs x_max > x_min");
        } else {
            sc.grid.auto_bounds = false;
            sc.grid.x_min = *xmin;
            sc.grid.x_max = *xmax;
        }
    } else if (xmin.has_value() != xmax.has_value()) {
        r.fail(r.section_line("grid"), "grid needs both x_min and x_max (or neither, for auto bounds)");
    }
    if (auto_flag && *auto_flag && !sc.grid.auto_bounds) {
        r.fail(r.section_line("grid"), "grid cannot be auto and have explicit bounds");
    }
}

GaussianSpec read_gaussian(Reader& r, const std::string& suffix, bool& ok) {
    GaussianSpec g;
    const auto sigma = r.number("state", "sigma" + suffix);
    if (!sigma) {
        r.fail(r.section_line("state"), "missing required key 'sigma" + suffix + "' in [state]");
        ok = false;
    } else if (!(*sigma > 0.0 && std::isfinite(*sigma))) {
        r.fail(r.line_of("state", "sigma" + suffix), "sigma" + suffix + " must be finite and > 0");
        ok = false;
    } else {
        g.sigma = *sigma;
    }
    if (auto v = r.number("state", "x0" + suffix)) g.x0 = *v;
    if (auto v = r.number("state", "p0" + suffix)) g.p0 = *v;
    if (auto v = r.number("state", "chirp" + suffix)) g.chirp = *v;
    if (!(std::isfinite(g.x0) && std::isfinite(g.p0) && std::isfinite(g.chirp))) {
        r.fail(r.section_line("state"), "gaussian parameters must be finite");
        ok = false;
    }
    return g;
}

void read_state(Reader& r, Scenario& sc) {
    const auto type = r.text("state", "type");
    const std::string kind = type ? lower(*type) : "gaussian";
    bool ok = true;
    if (kind == "gaussian") {
        sc.state.kind = StateSpec::Kind::Gaussian;
        sc.state.components = {read_gaussian(r, "", ok)};
    } else if (kind == "superposition") {
        sc.state.kind = StateSpec::Kind::Superposition;
        const auto count = r.integer("state", "count");
        if (!count || *count < 1 || *count > 16) {
            r.fail(count ? r.line_of("state", "count") : r.section_line("state"),
                   "superposition needs count in [1, 16]");
            return;
        }
        for (std::uint64_t c = 1; c <= *count; ++c) {
            const std::string sfx = "_" + std::to_string(c);
            sc.state.components.push_back(read_gaussian(r, sfx, ok));
            double wre = 1.0;
            double wim = 0.0;
            if (auto v = r.number("state", "weight_re" + sfx)) wre = *v;
            if (auto v = r.number("state", "weight_im" + sfx)) wim = *v;
            sc.state.weights.emplace_back(wre, wim);
        }
        double wnorm = 0.0;
        for (const cdouble& w : sc.state.weights) wnorm += std::norm(w);
        if (!(wnorm > 0.0)) {
            r.fail(r.section_line("state"), "superposition weights are all zero");
        }
    } else if (kind == "random") {
        sc.state.kind = StateSpec::Kind::RandomBandLimited;
        if (auto v = r.number("state", "band_center_max")) {
            if (*v >= 0.0 && std::isfinite(*v)) sc.state.random.band_center_max = *v;
            else r.fail(r.line_of("state", "band_center_max"), "band_center_max must be >= 0");
        }
        if (auto v = r.number("state", "band_sigma")) {
            if (*v > 0.0 && std::isfinite(*v)) sc.state.random.band_sigma = *v;
            else r.fail(r.line_of("state", "band_sigma"), "band_sigma must be > 0");
        }
        if (sc.grid.auto_bounds) {
            r.fail(r.section_line("state"),
                   "random states need explicit grid bounds (auto sizing has no closed-form envelope)");
        }
    } else {
        r.fail(r.line_of("state", "type"), "unknown state type '" + *type + "'");
    }
}

void read_mode(Reader& r, Scenario& sc) {
    const auto type = r.text("mode", "type");
    const std::string kind = type ? lower(*type) : "free";
    if (kind == "free") {
        sc.mode.kind = ModeSpec::Kind::Free;
    } else if (kind == "harmonic") {
        sc.mode.kind = ModeSpec::Kind::Harmonic;
        if (auto v = r.number("mode", "omega")) {
            if (*v >= 0.0 && std::isfinite(*v)) sc.mode.omega = *v;
            else r.fail(r.line_of("mode", "omega"), "omega must be finite and >= 0");
        }
    } else if (kind == "custom") {
        sc.mode.kind = ModeSpec::Kind::CustomTable;
        if (auto v = r.text("mode", "file")) {
            sc.mode.table_path = *v;
        } else {
            r.fail(r.section_line("mode"), "custom mode needs file = <potential table path>");
        }
    } else {
        r.fail(r.line_of("mode", "type"), "unknown mode type '" + *type + "'");
    }
    if (auto v = r.number("mode", "dt")) {
        if (*v > 0.0 && std::isfinite(*v)) sc.mode.dt_target = *v;
        else r.fail(r.line_of("mode", "dt"), "dt must be finite and > 0");
    }
}

void read_schedule(Reader& r, Scenario& sc) {
    const auto t_end = r.number("schedule", "t_end");
    if (!t_end) {
        r.fail(r.section_line("schedule"), "missing required key 't_end' in [schedule]");
    } else if (!(*t_end > 0.0 && std::isfinite(*t_end))) {
        r.fail(r.line_of("schedule", "t_end"), "t_end must be finite and > 0");
    } else {
        sc.schedule.t_end = *t_end;
    }
    const auto ns = r.integer("schedule", "n_samples");
    if (!ns) {
        r.fail(r.section_line("schedule"), "missing required key 'n_samples' in [schedule]");
    } else if (*ns < 2 || *ns > 1000000) {
        r.fail(r.line_of("schedule", "n_samples"), "n_samples must be in [2, 1000000]");
    } else {
        sc.schedule.n_samples = static_cast<int>(*ns);
    }
}

void read_tolerances(Reader& r, Scenario& sc) {
    const auto read = [&](const char* key, double& slot) {
        if (auto v = r.number("tolerances", key)) {
            if (*v > 0.0 && std::isfinite(*v)) slot = *v;
            else r.fail(r.line_of("tolerances", key), std::string(key) + " tolerance must be > 0");
        }
    };
    bool residual_from_file = r.find("tolerances", "residual") != nullptr;
    read("leak", sc.tolerances.leak);
    read("nyquist", sc.tolerances.nyquist);
    read("residual", sc.tolerances.residual);
    read("monotonicity", sc.tolerances.monotonicity);
    read("norm_drift", sc.tolerances.norm_drift);
    read("density_drift", sc.tolerances.density_drift);
    if (!residual_from_file) {
        try {
            if (const auto env = env_default_residual_tolerance()) sc.tolerances.residual = *env;
        } catch (const ConfigError& e) {
            r.fail(0, e.what());
        }
    }
}

}  // namespace

std::optional<double> env_default_residual_tolerance() {
    const char* raw = std::getenv("CORRFLOW_DEFAULT_TOL");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    const std::string s(raw);
    double v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError("CORRFLOW_DEFAULT_TOL must be a positive decimal, got '" + s + "'");
    }
    return v;
}

ScenarioParseResult parse_scenario(std::string_view text) {
    ScenarioParseResult result;
    Reader r = tokenize(text, result.errors, scenario_sections);

    Scenario sc;
    if (auto v = r.text("", "name")) {
        sc.name = *v;
    } else {
        r.fail(0, "missing required top-level key 'name'");
    }
    if (auto v = r.integer("", "seed")) sc.seed = *v;

    read_constants(r, sc);
    read_grid(r, sc);
    read_state(r, sc);
    read_mode(r, sc);
    read_schedule(r, sc);
    read_tolerances(r, sc);
    if (auto v = r.boolean("checks", "expect_decrease")) sc.expect_decrease = *v;

    r.flag_unconsumed(scenario_sections);

    if (result.errors.empty()) {
        result.scenario = std::move(sc);
    }
    std::stable_sort(result.errors.begin(), result.errors.end(),
                     [](const ParseIssue& a, const ParseIssue& b) { return a.line < b.line; });
    return result;
}

std::vector<double> parse_potential_table_file(const std::string& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open potential table '" + path + "'");
    std::vector<double> xs, vs;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto body = trim(line);
        if (body.empty()) continue;
        std::string token(body);
        std::replace(token.begin(), token.end(), ',', ' ');
        std::istringstream is(token);
        double x{}, v{};
        if (!(is >> x >> v)) {
            throw ConfigError("potential table '" + path + "' line " + std::to_string(number) +
                              ": expected 'x, V'");
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    return potential_from_table(grid, xs, vs);
}

PreparedScenario prepare(const Scenario& sc) {
    sc.constants.validate();
    sc.schedule.validate();

    Grid grid = [&] {
        if (!sc.grid.auto_bounds) {
            return Grid(sc.grid.n, sc.grid.x_min, sc.grid.x_max);
        }
        if (sc.state.kind == StateSpec::Kind::RandomBandLimited) {
            throw ConfigError("random states need explicit grid bounds");
        }
        std::vector<MomentEnvelope> envs;
        envs.reserve(sc.state.components.size());
        for (const GaussianSpec& g : sc.state.components) {
            g.validate();
            envs.push_back(g.envelope(sc.constants));
        }
        // Sizing always uses the free spreading law. Bound potentials breathe
        // inside that envelope; anything else is caught by per-sample guards.
        const DomainSuggestion d = auto_domain(envs, sc.schedule.t_end, sc.constants);
        const std::size_t n = sc.grid.n_explicit ? sc.grid.n : d.n;
        return Grid(n, d.x_min, d.x_max);
    }();

    WaveFunction psi0 = [&] {
        switch (sc.state.kind) {
            case StateSpec::Kind::Gaussian:
                return make_gaussian(sc.state.components.at(0), grid, sc.constants,
                                     sc.tolerances.guards());
            case StateSpec::Kind::Superposition:
                return make_superposition(sc.state.components, sc.state.weights, grid, sc.constants,
                                          sc.tolerances.guards());
            case StateSpec::Kind::RandomBandLimited:
                return make_random_band_limited(grid, sc.seed, sc.state.random);
        }
        throw ConfigError("unreachable state kind");
    }();

    PreparedScenario prepared{
        sc.name,
        sc.constants,
        grid,
        std::move(psi0),
        sc.mode.kind == ModeSpec::Kind::Free ? EvolutionMode::Free : EvolutionMode::Potential,
        {},
        sc.mode.dt_target,
        sc.schedule,
        sc.tolerances,
        sc.expect_decrease,
        sc.state.kind == StateSpec::Kind::Gaussian,
    };
    if (sc.mode.kind == ModeSpec::Kind::Harmonic) {
        prepared.potential = harmonic_potential(grid, sc.constants, sc.mode.omega);
    } else if (sc.mode.kind == ModeSpec::Kind::CustomTable) {
        prepared.potential = parse_potential_table_file(sc.mode.table_path, grid);
    }
    return prepared;
}

}  // namespace corrflow
