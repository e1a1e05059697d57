#pragma once

#include <cstddef>

#if defined(DLH_HAVE_OPENMP)
#include <omp.h>
#endif

namespace dlh {

// Runs fn(i) for i in [0, n). When parallel is true and OpenMP is available
// the iterations are distributed across threads; each iteration must write
// only to its own preassigned slot so serial and parallel runs produce
// identical results.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, bool parallel = true) {
#if defined(DLH_HAVE_OPENMP)
    if (parallel && n > 1) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline int parallel_threads() {
#if defined(DLH_HAVE_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace dlh
