#include "shubin/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace shubin {

namespace {
int g_max_threads = 1;
}

void set_max_threads(int n) { g_max_threads = n < 1 ? 1 : n; }
int max_threads() { return g_max_threads; }

void parallel_for(Index n, const std::function<void(Index)>& body) {
  const int workers = static_cast<int>(std::min<Index>(g_max_threads, n));
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (Index i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace shubin
