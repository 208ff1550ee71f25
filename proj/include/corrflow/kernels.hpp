#pragma once

#include <span>

#include "corrflow/fft.hpp"

namespace corrflow::kernels {

// y[i] *= factor[i]
void multiply_inplace(std::span<cdouble> y, std::span<const cdouble> factor);

// y[i] *= s
void scale_inplace(std::span<cdouble> y, cdouble s);

// Deterministic reductions: partial sums over fixed exec::reduce_block-element
// blocks, combined in block order. Thread count never changes the result.

// sum_i |v_i|^2
double sum_abs2(std::span<const cdouble> v);

// sum_i w_i |v_i|^2
double weighted_abs2(std::span<const cdouble> v, std::span<const double> w);

// sum_i conj(a_i) b_i
cdouble dot(std::span<const cdouble> a, std::span<const cdouble> b);

// sum_i conj(a_i) w_i b_i with real weights
cdouble weighted_dot(std::span<const cdouble> a, std::span<const double> w, std::span<const cdouble> b);

namespace reference {

// Plain left-to-right accumulation, the serial baselines for tests/benchmarks.
double sum_abs2(std::span<const cdouble> v);
double weighted_abs2(std::span<const cdouble> v, std::span<const double> w);
cdouble dot(std::span<const cdouble> a, std::span<const cdouble> b);

}  // namespace reference

}  // namespace corrflow::kernels
