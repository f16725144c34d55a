#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace majorana {

// Shared-memory map over [0, n). fn(i) must write only to its own slot(s);
// reductions happen serially afterwards so results do not depend on the
// thread count. fn must not throw (record a status per index instead).
template <class F>
void parallel_for(std::ptrdiff_t n, F&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
#else
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
#endif
}

// Serial reference loop with the same contract; kernels keep a serial twin
// built on this so tests can compare the two paths bitwise.
template <class F>
void serial_for(std::ptrdiff_t n, F&& fn) {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace majorana
