/// \file parallel.hpp
/// \brief Static-schedule parallel loop that forwards the first exception.
#pragma once

#include <exception>
#include <mutex>

#ifdef EFMHD_HAVE_OPENMP
#include <omp.h>
#endif

namespace efmhd {

/// Runs fn(i) for i in [0, n). Iterations must be independent; results do not
/// depend on the thread count. The exception from the lowest failing index is
/// rethrown after the loop.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  std::exception_ptr error;
  int error_index = n;
  std::mutex guard;
#ifdef EFMHD_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard lock(guard);
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

inline void set_num_threads(int n) {
#ifdef EFMHD_HAVE_OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline int max_threads() {
#ifdef EFMHD_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace efmhd
