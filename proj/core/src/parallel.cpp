#include "smallscat/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace smallscat {

namespace {

std::size_t initial_worker_count() {
  if (const char* env = std::getenv("SMALLSCAT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::atomic<std::size_t>& worker_slot() {
  static std::atomic<std::size_t> count{initial_worker_count()};
  return count;
}

}  // namespace

std::size_t worker_count() { return worker_slot().load(); }

void set_worker_count(std::size_t n) { worker_slot().store(n > 0 ? n : 1); }

void parallel_for_blocks(
    std::size_t begin, std::size_t end,
    const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t total = end > begin ? end - begin : 0;
  if (total == 0) return;
  const std::size_t workers = std::min(worker_count(), total);
  if (workers == 1) {
    body(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t base = total / workers;
  const std::size_t extra = total % workers;
  std::size_t lo = begin;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    const std::size_t hi = lo + len;
    if (w + 1 == workers) {
      body(lo, hi);
    } else {
      pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    lo = hi;
  }
  for (auto& t : pool) t.join();
}

}  // namespace smallscat
