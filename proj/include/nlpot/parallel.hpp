#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nlpot {

/// Global worker count for the helpers below. Defaults to the hardware
/// concurrency; set_num_threads(1) forces serial execution.
int num_threads();
void set_num_threads(int n);

namespace detail {
void run_chunked(std::size_t chunks, const std::function<void(std::size_t)>& chunk_fn);
std::size_t chunk_count(std::size_t n);
} // namespace detail

/// Parallel loop over [0, n). The body must only write to slots owned by its
/// own index, so the result is independent of the schedule.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  std::size_t chunks = detail::chunk_count(n);
  if (chunks <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t per = (n + chunks - 1) / chunks;
  detail::run_chunked(chunks, [&](std::size_t c) {
    std::size_t lo = c * per, hi = std::min(n, lo + per);
    for (std::size_t i = lo; i < hi; ++i) body(i);
  });
}

/// Sum of term(i) over [0, n). Partial sums are accumulated per fixed-size
/// chunk and combined in index order, so the result is bit-identical for any
/// thread count.
template <class F>
double parallel_sum(std::size_t n, F&& term) {
  std::size_t chunks = detail::chunk_count(n);
  if (chunks <= 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  std::size_t per = (n + chunks - 1) / chunks;
  std::vector<double> partial(chunks, 0.0);
  detail::run_chunked(chunks, [&](std::size_t c) {
    std::size_t lo = c * per, hi = std::min(n, lo + per);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[c] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

} // namespace nlpot
