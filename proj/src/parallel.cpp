#include "indra/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace indra {

namespace {

unsigned default_thread_count() {
  if (const char* env = std::getenv("INDRA_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<unsigned> g_threads{0};  // 0 = not yet resolved / auto

}  // namespace

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
  const unsigned n = g_threads.load();
  return n == 0 ? default_thread_count() : n;
}

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  // Static partition; chunk boundaries affect only scheduling, never values.
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t base = n / workers;
  const std::size_t extra = n % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    pool.emplace_back(fn, begin, begin + len);
    begin += len;
  }
  for (auto& t : pool) t.join();
}

}  // namespace indra
