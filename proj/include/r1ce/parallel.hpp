#ifndef R1CE_PARALLEL_HPP
#define R1CE_PARALLEL_HPP

// Deterministic fork-join helper: fixed chunk partitioning independent of the
// thread count, so results are bitwise reproducible for any --threads value.

#include <cstdint>
#include <functional>

namespace r1ce {

// Global worker count: explicit set_threads wins, else R1CE_THREADS, else
// hardware concurrency.
void set_threads(int n);
int get_threads();

// Run fn(begin, end) over [0, n) split into contiguous chunks. Serial when a
// single thread is requested or the range is small.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn,
                  int threads = 0);

// Same, returning the max of per-chunk doubles (max is order-independent).
double parallel_max(std::int64_t n,
                    const std::function<double(std::int64_t, std::int64_t)>& fn,
                    int threads = 0);

}  // namespace r1ce

#endif
