#ifndef MESHPLACE_COMMON_HPP
#define MESHPLACE_COMMON_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

namespace meshplace {

using json = nlohmann::json;

/// Bandwidth in megabits per second.
using Mbps = double;

/// Dense node identifier, 0..n-1 within one graph.
using NodeId = std::uint32_t;

using Seed = std::uint64_t;

/// Thrown when a computation cannot be completed for a well-formed request
/// (oracle budget refusal, generator infeasibility, ...).
class RuntimeFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace detail

/// Derives an independent sub-seed from a parent seed and a stream index.
inline Seed derive_seed(Seed parent, std::uint64_t stream) {
  return detail::splitmix64(detail::splitmix64(parent) ^ detail::splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Seed derive_seed(Seed parent, std::string_view label) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(parent, h);
}

/// Worker count: MESHPLACE_THREADS if set and positive, otherwise hardware
/// concurrency.
inline unsigned worker_count() {
  if (const char *env = std::getenv("MESHPLACE_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0)
      return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1U : hw;
}

/// Runs fn(i) for i in [0, count) on up to worker_count() threads. Each index
/// is visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
namespace detail {
inline thread_local bool in_parallel_region = false;
} // namespace detail

/// Nested calls from inside a worker run sequentially.
template <typename Fn> void parallel_for(std::size_t count, Fn &&fn) {
  const std::size_t workers =
      detail::in_parallel_region ? 1 : std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    const bool outer = detail::in_parallel_region;
    detail::in_parallel_region = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) {
        detail::in_parallel_region = outer;
        return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w)
    pool.emplace_back(body);
  body();
  for (auto &t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

} // namespace meshplace

#endif // MESHPLACE_COMMON_HPP
