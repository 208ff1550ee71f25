#include "corrflow/kernels.hpp"

#include <cstdint>
#include <vector>

#include "corrflow/errors.hpp"
#include "corrflow/exec.hpp"

namespace corrflow::kernels {

namespace {

template <typename T, typename Term>
T blocked_sum(std::size_t n, Term&& term) {
    const std::size_t block = exec::reduce_block;
    const std::size_t nblocks = (n + block - 1) / block;
    std::vector<T> partial(nblocks, T{});
    const bool par = exec::parallel_enabled() && n >= exec::parallel_cutoff;
    const auto nb = static_cast<std::int64_t>(nblocks);
#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t ib = 0; ib < nb; ++ib) {
        const std::size_t begin = static_cast<std::size_t>(ib) * block;
        const std::size_t end = (begin + block < n) ? begin + block : n;
        T acc{};
        for (std::size_t i = begin; i < end; ++i) {
            acc += term(i);
        }
        partial[static_cast<std::size_t>(ib)] = acc;
    }
    T total{};
    for (const T& p : partial) total += p;
    return total;
}

}  // namespace

void multiply_inplace(std::span<cdouble> y, std::span<const cdouble> factor) {
    if (y.size() != factor.size()) throw ConfigError("pointwise multiply length mismatch");
    const auto n = static_cast<std::int64_t>(y.size());
    const bool par = exec::parallel_enabled() && y.size() >= exec::parallel_cutoff;
#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] *= factor[static_cast<std::size_t>(i)];
    }
}

void scale_inplace(std::span<cdouble> y, cdouble s) {
    const auto n = static_cast<std::int64_t>(y.size());
    const bool par = exec::parallel_enabled() && y.size() >= exec::parallel_cutoff;
#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] *= s;
    }
}

double sum_abs2(std::span<const cdouble> v) {
    return blocked_sum<double>(v.size(), [&](std::size_t i) { return std::norm(v[i]); });
}

double weighted_abs2(std::span<const cdouble> v, std::span<const double> w) {
    if (v.size() != w.size()) throw ConfigError("weighted_abs2 length mismatch");
    return blocked_sum<double>(v.size(), [&](std::size_t i) { return w[i] * std::norm(v[i]); });
}

cdouble dot(std::span<const cdouble> a, std::span<const cdouble> b) {
    if (a.size() != b.size()) throw ConfigError("dot length mismatch");
    return blocked_sum<cdouble>(a.size(), [&](std::size_t i) { return std::conj(a[i]) * b[i]; });
}

cdouble weighted_dot(std::span<const cdouble> a, std::span<const double> w, std::span<const cdouble> b) {
    if (a.size() != b.size() || a.size() != w.size()) throw ConfigError("weighted_dot length mismatch");
    return blocked_sum<cdouble>(a.size(), [&](std::size_t i) { return std::conj(a[i]) * (w[i] * b[i]); });
}

namespace reference {

double sum_abs2(std::span<const cdouble> v) {
    double acc = 0.0;
    for (const cdouble& x : v) acc += std::norm(x);
    return acc;
}

double weighted_abs2(std::span<const cdouble> v, std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += w[i] * std::norm(v[i]);
    return acc;
}

cdouble dot(std::span<const cdouble> a, std::span<const cdouble> b) {
    cdouble acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

}  // namespace reference

}  // namespace corrflow::kernels
