#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "corrflow/grid.hpp"

namespace corrflow::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline std::vector<cdouble> random_complex(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<cdouble> v(n);
    for (auto& x : v) x = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    return v;
}

inline double max_abs_diff(std::span<const cdouble> a, std::span<const cdouble> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Distance up to a global phase: aligns b to a with the phase of <a|b>.
inline double max_abs_diff_up_to_phase(const WaveFunction& a, const WaveFunction& b) {
    const cdouble overlap = inner_product(a, b);
    const cdouble phase = overlap / std::abs(overlap);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.values()[i] - b.values()[i] / phase));
    }
    return m;
}

}  // namespace corrflow::testing
