#pragma once

#ifdef VFLAB_OPENMP
#include <omp.h>
#endif

namespace vflab {

// Worker-count control for the OpenMP kernels. Every parallel loop in this
// library distributes independent outputs across threads (no floating-point
// reductions), so results are bitwise identical for any thread count.
inline int thread_count() {
#ifdef VFLAB_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef VFLAB_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace vflab
