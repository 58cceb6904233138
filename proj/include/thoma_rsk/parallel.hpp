#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace thoma {

inline unsigned default_workers() noexcept { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs fn(t) for t in [0, trials) on `workers` threads and returns the
/// results indexed by t. Results never depend on the worker count as long as
/// fn(t) only depends on t.
template <class Result, class Fn>
std::vector<Result> run_trials(std::size_t trials, unsigned workers, Fn&& fn) {
  std::vector<Result> out(trials);
  if (trials == 0) return out;
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::min<std::size_t>(trials, 1024)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) out[t] = fn(t);
    return out;
  }

  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    try {
      for (;;) {
        std::size_t begin = next.fetch_add(kChunk);
        if (begin >= trials) return;
        std::size_t end = std::min(trials, begin + kChunk);
        for (std::size_t t = begin; t < end; ++t) out[t] = fn(t);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(trials);
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace thoma
