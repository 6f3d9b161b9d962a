#pragma once

#include <cstddef>
#include <functional>
#include <span>

// Deterministic parallel helpers: work is indexed, results land in
// preallocated slots, and reductions use a fixed pairwise order so values are
// bit-identical for any worker count.

namespace tocgeo {

// Hardware concurrency, capped by the TOCGEO_WORKERS environment variable.
unsigned worker_count();

// Runs fn(0..n-1) on up to `workers` threads (0 = worker_count()). The first
// exception thrown by any worker is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned workers = 0);

// Pairwise (cascade) summation; order independent of thread count.
double pairwise_sum(std::span<const double> xs);

}  // namespace tocgeo
