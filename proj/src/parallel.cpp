#include "r1ce/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace r1ce {

namespace {
int g_threads = 0;

int default_threads() {
  if (const char* env = std::getenv("R1CE_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}
}  // namespace

void set_threads(int n) { g_threads = n > 0 ? n : 0; }

int get_threads() { return g_threads > 0 ? g_threads : default_threads(); }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn,
                  int threads) {
  int t = threads > 0 ? threads : get_threads();
  if (t <= 1 || n < 4096) {
    fn(0, n);
    return;
  }
  t = static_cast<int>(std::min<std::int64_t>(t, n));
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  std::int64_t chunk = (n + t - 1) / t;
  for (int k = 1; k < t; ++k) {
    std::int64_t b = k * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  fn(0, std::min(n, chunk));
  for (auto& th : pool) th.join();
}

double parallel_max(std::int64_t n,
                    const std::function<double(std::int64_t, std::int64_t)>& fn, int threads) {
  int t = threads > 0 ? threads : get_threads();
  if (t <= 1 || n < 4096) return fn(0, n);
  t = static_cast<int>(std::min<std::int64_t>(t, n));
  std::vector<double> partial(t, -1e300);
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  std::int64_t chunk = (n + t - 1) / t;
  for (int k = 1; k < t; ++k) {
    std::int64_t b = k * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&partial, &fn, k, b, e] { partial[k] = fn(b, e); });
  }
  partial[0] = fn(0, std::min(n, chunk));
  for (auto& th : pool) th.join();
  double m = -1e300;
  for (double v : partial) m = std::max(m, v);
  return m;
}

}  // namespace r1ce
