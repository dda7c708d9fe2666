#pragma once

// Seed-parallel ensembles. Replicate i always runs on RngStream(seed, i), so
// the result vector is identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

#include "twoeq/rng.hpp"

namespace twoeq {

inline unsigned default_thread_count() {
  return std::max(1u, std::thread::hardware_concurrency());
}

template <typename Fn>
auto run_ensemble(std::int64_t replicates, std::uint64_t seed, Fn&& fn,
                  unsigned threads = default_thread_count())
    -> std::vector<std::invoke_result_t<Fn&, RngStream&, std::int64_t>> {
  using Result = std::invoke_result_t<Fn&, RngStream&, std::int64_t>;
  std::vector<Result> results;
  if (replicates <= 0) return results;
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(replicates));

  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= replicates) return;
      try {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        slots[static_cast<std::size_t>(i)].emplace(fn(rng, i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(replicates);
      }
    }
  };

  const auto count = static_cast<unsigned>(
      std::min<std::int64_t>(std::max(1u, threads), replicates));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  results.reserve(slots.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

}  // namespace twoeq
