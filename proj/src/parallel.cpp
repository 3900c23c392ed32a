#include "bhlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bhlab {

namespace {

int g_workers = 0;  // 0 = not yet resolved

int resolve_default() {
  if (const char* env = std::getenv("BHLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int worker_count() {
  if (g_workers <= 0) g_workers = resolve_default();
  return g_workers;
}

void set_worker_count(int n) { g_workers = n > 0 ? n : 0; }

std::size_t chunk_count(std::size_t n) {
  // Fixed fan-out: fine enough to balance, coarse enough to keep per-chunk
  // overhead negligible.  Independent of the worker count by design.
  constexpr std::size_t kMaxChunks = 128;
  return n < kMaxChunks ? n : kMaxChunks;
}

void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t chunks = chunk_count(n);
  const auto chunk_bounds = [&](std::size_t c) {
    const std::size_t lo = n * c / chunks;
    const std::size_t hi = n * (c + 1) / chunks;
    return std::pair<std::size_t, std::size_t>{lo, hi};
  };

  const int workers = worker_count();
  if (workers <= 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      const auto [lo, hi] = chunk_bounds(c);
      body(c, lo, hi);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  const auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) break;
      const auto [lo, hi] = chunk_bounds(c);
      try {
        body(c, lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  const int spawn = std::min<std::size_t>(workers, chunks) - 1;
  pool.reserve(spawn);
  for (int i = 0; i < spawn; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bhlab
