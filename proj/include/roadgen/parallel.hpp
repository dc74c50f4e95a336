#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace roadgen {

// Kernels take an ExecutionPolicy so the serial path stays available as a
// reference implementation for tests and benchmarks.
enum class ExecutionPolicy { serial, parallel };

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Runs body(i) for i in [0, n). Results must be written to index-addressed
// slots; static scheduling keeps the partition stable but outputs may not
// depend on execution order either way.
template <typename F>
void parallel_for(std::size_t n, ExecutionPolicy policy, F&& body) {
#ifdef _OPENMP
  if (policy == ExecutionPolicy::parallel) {
    #pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)policy;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace roadgen
