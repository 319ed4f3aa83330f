#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace inflap {

// One real value per grid node.  Node order is fixed by the GridDomain that
// the field lives on, so fields from the same grid can be combined with
// ordinary Eigen array expressions.
template <typename Scalar>
using Field = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using ScalarField = Field<double>;

// Boolean per node, same indexing as ScalarField.
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Deterministic pairwise (cascade) summation.  The result depends only on the
// element order, never on chunking or thread count, which keeps aggregated
// statistics byte-stable across machines and run configurations.
template <typename Scalar>
Scalar pairwise_sum(std::span<const Scalar> values) {
  const std::size_t n = values.size();
  if (n == 0) return Scalar(0);
  if (n <= 8) {
    Scalar acc = values[0];
    for (std::size_t i = 1; i < n; ++i) acc += values[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

// Resolve a thread-count request: 0 means "use the hardware", anything else
// is clamped to at least one.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (hw > 16) hw = 16;
  return static_cast<int>(hw);
}

// Run fn(begin, end) over a partition of [0, n).  Each invocation owns its
// index range exclusively, so the caller's writes are race-free and the
// result cannot depend on the number of threads.
inline void parallel_for(Eigen::Index n, int threads,
                         const std::function<void(Eigen::Index, Eigen::Index)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || n < 4096) {
    fn(0, n);
    return;
  }
  if (threads > static_cast<int>(n)) threads = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  const Eigen::Index chunk = (n + threads - 1) / threads;
  for (int t = 1; t < threads; ++t) {
    Eigen::Index b = t * chunk;
    Eigen::Index e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  fn(0, std::min(n, chunk));
  for (auto& th : pool) th.join();
}

}  // namespace inflap
