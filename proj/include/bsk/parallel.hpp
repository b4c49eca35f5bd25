#pragma once

#include <cstddef>
#include <functional>

namespace bsk {

// Global worker-thread cap for data-parallel node loops (1 = serial).
void set_max_threads(int n);
int max_threads();

// Splits [0, n) into contiguous chunks, one worker per chunk. Results must be
// written to disjoint slots so the outcome is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Deterministic pairwise reduction of a contiguous array.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace bsk
