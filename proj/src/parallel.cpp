#include "siren/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace siren {

namespace {

std::atomic<int> g_override{ 0 };
thread_local bool t_inside_worker = false;

int from_environment()
{
  if (const char* env = std::getenv("SIREN_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v >= 1)
        return v;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

int worker_count()
{
  int v = g_override.load();
  return v >= 1 ? v : from_environment();
}

void set_worker_count(int workers) { g_override.store(std::max(0, workers)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
  const auto workers =
    std::min<std::size_t>(count, static_cast<std::size_t>(worker_count()));
  if (workers <= 1 || t_inside_worker) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    const bool was_inside = t_inside_worker;
    t_inside_worker = true;
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count)
        break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next.store(count);
      }
    }
    t_inside_worker = was_inside;
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w)
    pool.emplace_back(run);
  run();
  for (auto& th : pool)
    th.join();
  if (error)
    std::rethrow_exception(error);
}

} // namespace siren
