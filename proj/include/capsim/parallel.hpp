#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace capsim {

// Number of OpenMP threads that `threads` requests: 0 means the runtime
// default, anything else is taken literally.  Without OpenMP this is 1.
inline int resolve_threads(int threads) {
#ifdef _OPENMP
  return threads == 0 ? omp_get_max_threads() : threads;
#else
  (void)threads;
  return 1;
#endif
}

// Evaluate fn(b) for b in [0, n_blocks) and return the results in block
// order.  This is the serial reference implementation: a plain loop.
template <typename T, typename Fn>
std::vector<T> map_blocks_serial(std::size_t n_blocks, Fn&& fn) {
  std::vector<T> out(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) out[b] = fn(b);
  return out;
}

// OpenMP version of map_blocks_serial.  Each block writes to its own slot,
// so the result vector is identical to the serial one regardless of thread
// count or schedule; reductions over it are then performed in block order by
// the caller, giving bit-identical floating-point results.
template <typename T, typename Fn>
std::vector<T> map_blocks_parallel(std::size_t n_blocks, int threads, Fn&& fn) {
  std::vector<T> out(n_blocks);
#ifdef _OPENMP
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (long long b = 0; b < static_cast<long long>(n_blocks); ++b) {
    out[static_cast<std::size_t>(b)] = fn(static_cast<std::size_t>(b));
  }
#else
  (void)threads;
  for (std::size_t b = 0; b < n_blocks; ++b) out[b] = fn(b);
#endif
  return out;
}

// Dispatch: threads == 1 runs the serial reference path, anything else the
// OpenMP path.  Both produce the same bytes by construction.
template <typename T, typename Fn>
std::vector<T> map_blocks(std::size_t n_blocks, int threads, Fn&& fn) {
  if (threads == 1) return map_blocks_serial<T>(n_blocks, fn);
  return map_blocks_parallel<T>(n_blocks, threads, fn);
}

}  // namespace capsim
