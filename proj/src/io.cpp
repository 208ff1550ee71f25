#include "corrflow/io.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "corrflow/errors.hpp"

namespace corrflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_timeseries_csv(const TimeSeries& series, std::ostream& sink) {
    if (series.samples.empty()) throw ConfigError("cannot emit an empty time series");
    sink << "time,mean_x,mean_p,var_x,var_p,mean_x2,mean_c,cov_xp,mean_h,guard_flags\n";
    for (const MomentSet& m : series.samples) {
        sink << format_double(m.time) << ',' << format_double(m.mean_x) << ','
             << format_double(m.mean_p) << ',' << format_double(m.var_x) << ','
             << format_double(m.var_p) << ',' << format_double(m.mean_x2) << ','
             << format_double(m.mean_c) << ',' << format_double(m.cov_xp) << ','
             << format_double(m.mean_h) << ',' << m.guard_flags << '\n';
    }
    if (!sink) throw ConfigError("time series sink write failure");
}

void write_check_report(const std::vector<ScenarioReport>& reports, std::ostream& sink) {
    nlohmann::ordered_json root = nlohmann::ordered_json::array();
    for (const ScenarioReport& r : reports) {
        nlohmann::ordered_json gates = nlohmann::ordered_json::array();
        for (const GateResult& g : r.gates) {
            gates.push_back({{"name", g.name},
                             {"max_residual", g.max_residual},
                             {"tolerance", g.tolerance},
                             {"pass", g.pass}});
        }
        nlohmann::ordered_json t_star;
        t_star["oracle"] = r.t_star_oracle ? nlohmann::ordered_json(*r.t_star_oracle)
                                           : nlohmann::ordered_json(nullptr);
        t_star["simulated"] = r.t_star_simulated ? nlohmann::ordered_json(*r.t_star_simulated)
                                                 : nlohmann::ordered_json(nullptr);
        nlohmann::ordered_json entry{
            {"scenario", r.scenario}, {"pass", r.pass}, {"gates", gates}, {"t_star", t_star}};
        if (!r.errors.empty()) entry["errors"] = r.errors;
        root.push_back(std::move(entry));
    }
    sink << root.dump(2) << '\n';
    if (!sink) throw ConfigError("report sink write failure");
}

}  // namespace corrflow
