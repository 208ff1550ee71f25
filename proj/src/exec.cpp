#include "corrflow/exec.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace corrflow::exec {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() noexcept { return g_parallel.load(std::memory_order_relaxed); }

void set_parallel(bool enabled) noexcept { g_parallel.store(enabled, std::memory_order_relaxed); }

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace corrflow::exec
