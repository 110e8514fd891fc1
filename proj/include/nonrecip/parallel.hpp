#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nonrecip {

/// Worker count: hardware concurrency, capped by NONRECIP_THREADS if set.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Results must be written to per-index slots;
/// exceptions from any worker are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation, independent of thread scheduling.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace nonrecip
