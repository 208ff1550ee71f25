// corrflow — spectral engine for position-momentum correlation dynamics.
//
// Verbs:
//   run <scenario> [--out csv]          sample one trajectory to CSV
//   check <files-or-dirs> [--report j]  gate suite, exit 0 iff all pass
//   sweep <family> [--jobs N] [--out]   parallel family sweep

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "corrflow/check.hpp"
#include "corrflow/errors.hpp"
#include "corrflow/io.hpp"
#include "corrflow/sweep.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw corrflow::ConfigError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void print_issues(const std::string& path, const std::vector<corrflow::ParseIssue>& issues) {
    for (const corrflow::ParseIssue& issue : issues) {
        std::cerr << path << ":" << issue.line << ": " << issue.message << '\n';
    }
}

int cmd_run(const std::string& scenario_path, const std::string& out_path) {
    const auto parsed = corrflow::parse_scenario(slurp(scenario_path));
    if (!parsed.ok()) {
        print_issues(scenario_path, parsed.errors);
        return 2;
    }
    const auto prepared = corrflow::prepare(*parsed.scenario);
    const auto series =
        corrflow::run_trajectory(prepared.psi0, prepared.schedule, prepared.mode, prepared.consts,
                                 prepared.potential, prepared.dt_target,
                                 prepared.tolerances.guards(), prepared.name);
    if (out_path.empty()) {
        corrflow::emit_timeseries_csv(series, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw corrflow::ConfigError("cannot write '" + out_path + "'");
        corrflow::emit_timeseries_csv(series, out);
    }
    return 0;
}

std::vector<std::string> collect_scenarios(const std::vector<std::string>& inputs) {
    std::vector<std::string> files;
    for (const std::string& input : inputs) {
        if (std::filesystem::is_directory(input)) {
            std::vector<std::string> dir_files;
            for (const auto& entry : std::filesystem::directory_iterator(input)) {
                if (entry.is_regular_file() && entry.path().extension() == ".scn") {
                    dir_files.push_back(entry.path().string());
                }
            }
            std::sort(dir_files.begin(), dir_files.end());
            files.insert(files.end(), dir_files.begin(), dir_files.end());
        } else {
            files.push_back(input);
        }
    }
    return files;
}

int cmd_check(const std::vector<std::string>& inputs, const std::string& report_path) {
    const auto files = collect_scenarios(inputs);
    if (files.empty()) {
        std::cerr << "no scenario files found\n";
        return 2;
    }
    int status = 0;
    if (report_path.empty()) {
        status = corrflow::run_check_suite(files, std::cout, std::cerr);
    } else {
        std::ofstream report(report_path, std::ios::binary);
        if (!report) throw corrflow::ConfigError("cannot write '" + report_path + "'");
        status = corrflow::run_check_suite(files, report, std::cout);
    }
    return status;
}

int cmd_sweep(const std::string& family_path, int jobs, const std::string& out_path) {
    const auto parsed = corrflow::parse_family(slurp(family_path));
    if (!parsed.ok()) {
        print_issues(family_path, parsed.errors);
        return 2;
    }
    const auto summary = corrflow::run_sweep(*parsed.family, jobs);
    if (out_path.empty()) {
        corrflow::emit_sweep_csv(summary, std::cout);
        corrflow::print_sweep_summary(summary, std::cerr);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw corrflow::ConfigError("cannot write '" + out_path + "'");
        corrflow::emit_sweep_csv(summary, out);
        corrflow::print_sweep_summary(summary, std::cout);
    }
    return summary.violations == 0 && summary.skipped == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"position-momentum correlation dynamics on a spectral lattice"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, report_path, family_path;
    int jobs = 1;

    auto* run = app.add_subcommand("run", "run one scenario and emit the moment time series as CSV");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* check = app.add_subcommand("check", "run the gate suite over scenario files");
    std::vector<std::string> check_inputs;
    check->add_option("inputs", check_inputs, "scenario files or directories of *.scn")->required();
    check->add_option("--report", report_path, "JSON report path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "run a family sweep over sigma/chirp/p0 ranges");
    sweep->add_option("family", family_path, "family file")->required();
    sweep->add_option("--jobs", jobs, "worker count")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_path, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, out_path);
        if (check->parsed()) return cmd_check(check_inputs, report_path);
        if (sweep->parsed()) return cmd_sweep(family_path, jobs, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
