#pragma once

#include <cstddef>

namespace corrflow::exec {

// Process-wide switch for the OpenMP kernel paths. The parallel and serial
// paths perform identical arithmetic (independent writes, fixed-block
// reductions), so toggling this never changes computed values.
bool parallel_enabled() noexcept;
void set_parallel(bool enabled) noexcept;

// Threads OpenMP would use for a parallel region right now.
int max_threads() noexcept;

// Arrays shorter than this run serial; threading overhead dominates below it.
inline constexpr std::size_t parallel_cutoff = 4096;

// Reduction block length. Partial sums are taken over fixed blocks of this
// many elements and combined in block order, so the result is independent of
// the thread count.
inline constexpr std::size_t reduce_block = 1024;

}  // namespace corrflow::exec
