// Kernel benchmark: OpenMP paths against the serial references, plus one
// whole-trajectory throughput figure.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "corrflow/evolution.hpp"
#include "corrflow/exec.hpp"
#include "corrflow/kernels.hpp"
#include "corrflow/states.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using corrflow::kernels::cdouble;
using clock_type = std::chrono::steady_clock;

std::vector<cdouble> random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<cdouble> v(n);
    for (auto& x : v) {
        const double re = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
        const double im = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
        x = {re, im};
    }
    return v;
}

template <typename F>
double time_ms(int reps, F&& body) {
    const auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) body();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corrflow kernel benchmark: serial reference vs OpenMP paths"};
    int min_log2 = 10, max_log2 = 18, reps = 20, threads = 0;
    app.add_option("--min-log2", min_log2, "smallest transform size, log2");
    app.add_option("--max-log2", max_log2, "largest transform size, log2");
    app.add_option("--reps", reps, "repetitions per measurement");
    app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    std::printf("OpenMP threads: %d\n", corrflow::exec::max_threads());
#else
    std::printf("built without OpenMP; both columns run serial\n");
#endif

    std::printf("\n%-14s %10s %12s %12s %9s %12s\n", "kernel", "n", "serial ms", "parallel ms",
                "speedup", "max |diff|");

    for (int lg = min_log2; lg <= max_log2; ++lg) {
        const std::size_t n = std::size_t{1} << lg;
        const auto plan = corrflow::kernels::plan_for(n);
        const auto base = random_signal(n, 42);

        auto serial_buf = base;
        corrflow::exec::set_parallel(false);
        const double t_serial = time_ms(reps, [&] {
            plan->execute(serial_buf, corrflow::kernels::FftDirection::Forward);
            plan->execute(serial_buf, corrflow::kernels::FftDirection::Inverse);
        });
        auto parallel_buf = base;
        corrflow::exec::set_parallel(true);
        const double t_parallel = time_ms(reps, [&] {
            plan->execute(parallel_buf, corrflow::kernels::FftDirection::Forward);
            plan->execute(parallel_buf, corrflow::kernels::FftDirection::Inverse);
        });
        std::printf("%-14s %10zu %12.4f %12.4f %8.2fx %12.3e\n", "fft roundtrip", n, t_serial,
                    t_parallel, t_serial / t_parallel, max_abs_diff(serial_buf, parallel_buf));
    }

    for (int lg = min_log2; lg <= max_log2; ++lg) {
        const std::size_t n = std::size_t{1} << lg;
        const auto a = random_signal(n, 7);
        const auto b = random_signal(n, 11);
        corrflow::exec::set_parallel(false);
        cdouble serial_result{};
        const double t_serial =
            time_ms(reps, [&] { serial_result = corrflow::kernels::dot(a, b); });
        corrflow::exec::set_parallel(true);
        cdouble parallel_result{};
        const double t_parallel =
            time_ms(reps, [&] { parallel_result = corrflow::kernels::dot(a, b); });
        std::printf("%-14s %10zu %12.4f %12.4f %8.2fx %12.3e\n", "blocked dot", n, t_serial,
                    t_parallel, t_serial / t_parallel, std::abs(serial_result - parallel_result));
    }

    // Reference DFT at a small size, to show what the fast path replaces.
    {
        const std::size_t n = 1024;
        const auto base = random_signal(n, 3);
        const auto plan = corrflow::kernels::plan_for(n);
        std::vector<cdouble> fast = base;
        const double t_fast =
            time_ms(reps, [&] { plan->execute(fast, corrflow::kernels::FftDirection::Forward); });
        std::vector<cdouble> slow;
        const double t_slow = time_ms(3, [&] {
            slow = corrflow::kernels::reference::dft(base, corrflow::kernels::FftDirection::Forward);
        });
        std::printf("%-14s %10zu %12.4f %12.4f %8.2fx %12s\n", "dft reference", n, t_slow, t_fast,
                    t_slow / t_fast, "-");
    }

    // Whole-trajectory throughput at production size.
    {
        const corrflow::PhysicalConstants consts;
        const corrflow::Grid grid(4096, -60.0, 60.0);
        const auto psi =
            corrflow::make_gaussian(corrflow::GaussianSpec{0.0, 0.0, 1.0, -0.5}, grid, consts);
        const corrflow::Schedule schedule{2.0, 51};
        const double t_run = time_ms(3, [&] {
            const auto series = corrflow::run_trajectory(psi, schedule, corrflow::EvolutionMode::Free,
                                                         consts, {}, 1e-3, {}, "bench");
            (void)series;
        });
        std::printf("\nfree trajectory (n=4096, 51 samples): %.2f ms\n", t_run);
    }
    return 0;
}
