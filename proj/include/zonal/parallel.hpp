#ifndef ZONAL_PARALLEL_HPP
#define ZONAL_PARALLEL_HPP

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace zonal {

inline int default_thread_count() {
  if (const char* env = std::getenv("ZONAL_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

/// Runs fn(i) for i in [0, n) over a static block partition. Work items must
/// be independent and write only to their own index, so results do not
/// depend on the thread count.
template <class F>
void parallel_for(int n, int threads, F&& fn) {
  if (n <= 0) return;
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const int chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const int lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace zonal

#endif
