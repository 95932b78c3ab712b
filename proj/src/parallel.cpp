#include "stopbound/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace stopbound {

namespace {
thread_local bool t_inside_worker = false;
}

std::size_t worker_count() {
  std::size_t n = 0;
  if (const char* env = std::getenv("STOPBOUND_THREADS")) {
    try {
      const long parsed = std::stol(env);
      if (parsed > 0) n = static_cast<std::size_t>(parsed);
    } catch (...) {
      n = 0;  // malformed -> auto
    }
  }
  if (n == 0) {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1 || t_inside_worker) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      t_inside_worker = true;
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
      t_inside_worker = false;
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace stopbound
