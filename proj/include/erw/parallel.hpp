#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string_view>
#include <thread>
#include <vector>

namespace erw {

/// How a batch of independent replicas is seeded and scheduled.
struct ReplicaPlan {
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
};

/// Evaluates fn(i) for i in [0, count) on `workers` threads and returns the
/// results in index order. Each call must depend only on its index, so the
/// output is identical for any worker count.
template <class Result, class Fn>
std::vector<Result> run_replicas(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<Result> out(count);
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(kChunk);
        if (begin >= count) break;
        const std::size_t end = std::min(count, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace erw
