#include "corrflow/fft.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "corrflow/errors.hpp"
#include "corrflow/exec.hpp"

namespace corrflow::kernels {

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n < 2 || !std::has_single_bit(n)) {
        throw ConfigError("FFT size must be a power of two >= 2, got " + std::to_string(n));
    }
    const int log2n = std::countr_zero(n);

    twiddle_.resize(n / 2);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t r = 0; r < n / 2; ++r) {
        twiddle_[r] = std::polar(1.0, step * static_cast<double>(r));
    }

    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t rev = 0;
        for (int b = 0; b < log2n; ++b) {
            rev = (rev << 1) | ((i >> b) & 1u);
        }
        bitrev_[i] = rev;
    }
}

void FftPlan::execute(std::span<cdouble> data, FftDirection dir) const {
    if (data.size() != n_) {
        throw ConfigError("FFT plan size mismatch");
    }
    cdouble* a = data.data();
    const bool inverse = (dir == FftDirection::Inverse);
    const bool par = exec::parallel_enabled() && n_ >= exec::parallel_cutoff;

    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto half_n = static_cast<std::int64_t>(n_ / 2);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t tstep = n_ / len;
#pragma omp parallel for schedule(static) if (par)
        for (std::int64_t b = 0; b < half_n; ++b) {
            const std::size_t j = static_cast<std::size_t>(b) % half;
            const std::size_t s = (static_cast<std::size_t>(b) / half) * len;
            cdouble w = twiddle_[j * tstep];
            if (inverse) w = std::conj(w);
            const cdouble u = a[s + j];
            const cdouble v = a[s + j + half] * w;
            a[s + j] = u + v;
            a[s + j + half] = u - v;
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n_);
        const auto nn = static_cast<std::int64_t>(n_);
#pragma omp parallel for schedule(static) if (par)
        for (std::int64_t i = 0; i < nn; ++i) {
            a[i] *= scale;
        }
    }
}

std::shared_ptr<const FftPlan> plan_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const FftPlan>(n);
    return slot;
}

namespace reference {

std::vector<cdouble> dft(std::span<const cdouble> in, FftDirection dir) {
    const std::size_t n = in.size();
    const double sign = (dir == FftDirection::Forward) ? -1.0 : 1.0;
    std::vector<cdouble> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        cdouble acc{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) {
            const double angle =
                sign * 2.0 * std::numbers::pi * static_cast<double>(j) * static_cast<double>(m) / static_cast<double>(n);
            acc += in[m] * std::polar(1.0, angle);
        }
        out[j] = (dir == FftDirection::Inverse) ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

}  // namespace reference

}  // namespace corrflow::kernels
