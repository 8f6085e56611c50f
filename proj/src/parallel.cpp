#include "nlpot/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace nlpot {

namespace {
int g_threads = 0; // 0 = uninitialized, resolve lazily
}

int num_threads() {
  if (g_threads <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    g_threads = hc > 0 ? static_cast<int>(hc) : 1;
  }
  return g_threads;
}

void set_num_threads(int n) { g_threads = std::max(1, n); }

namespace detail {

std::size_t chunk_count(std::size_t n) {
  if (n < 2048 || num_threads() == 1) return 1;
  // Chunk layout depends only on n, never on the thread count.
  return std::min<std::size_t>(256, n / 512);
}

void run_chunked(std::size_t chunks, const std::function<void(std::size_t)>& chunk_fn) {
  int workers = std::min<int>(num_threads(), static_cast<int>(chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) chunk_fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t c = next.fetch_add(1);
        if (c >= chunks) break;
        chunk_fn(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace detail
} // namespace nlpot
