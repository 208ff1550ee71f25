#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace corrflow::kernels {

using cdouble = std::complex<double>;

enum class FftDirection { Forward, Inverse };

/// Precomputed twiddle factors and bit-reversal table for one power-of-two
/// transform size. Plans are immutable after construction and safe to share
/// across threads.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    // In-place radix-2 transform, X_j = sum_m x_m e^{-2 pi i j m / n} forward;
    // the inverse applies conjugate twiddles and the 1/n scale. Every butterfly
    // writes a distinct pair of slots, so the OpenMP path produces bit-identical
    // output to the serial path.
    void execute(std::span<cdouble> data, FftDirection dir) const;

private:
    std::size_t n_;
    std::vector<cdouble> twiddle_;        // e^{-2 pi i r / n}, r < n/2
    std::vector<std::uint32_t> bitrev_;
};

// Shared plan cache keyed by transform size.
std::shared_ptr<const FftPlan> plan_for(std::size_t n);

namespace reference {

// Direct O(n^2) DFT. Kept as the independent check on the fast transform and
// as the serial baseline in the kernel benchmark.
std::vector<cdouble> dft(std::span<const cdouble> in, FftDirection dir);

}  // namespace reference

}  // namespace corrflow::kernels
