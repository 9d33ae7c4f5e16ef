#pragma once

// Replicate-level parallelism with results independent of the worker count.
//
// Every replicate draws from its own generator seeded by split_seed(seed,
// stream, index); results are written to per-index slots and reduced in a
// fixed order with pairwise_sum. jobs == 1 runs the plain serial loop, which
// is the reference the OpenMP path is tested against.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fracequiv {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Sub-seed for replicate `index` of stream `stream` under a master seed:
/// mix64(mix64(mix64(seed) ^ stream) + index * golden).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

/// Pairwise (cascade) summation in a fixed association order.
double pairwise_sum(std::span<const double> values) noexcept;

/// Clamp a requested job count to >= 1.
int effective_jobs(int jobs) noexcept;

/// out[i] = body(i) for i < count. Serial when jobs == 1, otherwise an
/// OpenMP loop with `jobs` threads; body must only depend on i.
template <class Body>
std::vector<double> parallel_map(std::size_t count, int jobs, Body&& body) {
  std::vector<double> out(count);
  const int nthreads = effective_jobs(jobs);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = body(i);
    return out;
  }
  const auto n = static_cast<long long>(count);
#pragma omp parallel for num_threads(nthreads) schedule(dynamic)
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = body(static_cast<std::size_t>(i));
  return out;
}

/// body(i) for i < count, same scheduling contract as parallel_map.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
  const int nthreads = effective_jobs(jobs);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const auto n = static_cast<long long>(count);
#pragma omp parallel for num_threads(nthreads) schedule(dynamic)
  for (long long i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace fracequiv
