#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace cyclobox {

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total)>;

/// Worker count plus an optional progress callback.
struct WorkerPlan {
  unsigned workers = 1;
  ProgressFn progress;

  WorkerPlan(unsigned w) : workers(w) {}  // NOLINT(implicit)
  WorkerPlan(unsigned w, ProgressFn p) : workers(w), progress(std::move(p)) {}
};

/**
 * Evaluates fn(i) for i in [0, count) on `plan.workers` threads, each owning one
 * contiguous block of indices, and returns the results in index order. The
 * first exception thrown by any worker is rethrown after all threads join.
 * When `plan.progress` is set the calling thread reports completed indices about
 * every 250 ms.
 */
template <class Fn>
auto parallel_index_map(std::uint64_t count, const WorkerPlan& plan, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t>> {
  using R = std::invoke_result_t<Fn&, std::uint64_t>;
  const ProgressFn& progress = plan.progress;
  unsigned workers = plan.workers;
  if (workers == 0) throw std::invalid_argument("worker count must be positive");
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));

  std::vector<std::optional<R>> slots(count);
  std::atomic<std::uint64_t> done{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto run_block = [&](std::uint64_t begin, std::uint64_t end) {
    try {
      for (std::uint64_t i = begin; i < end; ++i) {
        slots[i].emplace(fn(i));
        done.fetch_add(1, std::memory_order_relaxed);
      }
    } catch (...) {
      const std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };

  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::uint64_t block = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(count, w * block);
      const std::uint64_t end = std::min<std::uint64_t>(count, begin + block);
      if (workers == 1 && !progress) {
        run_block(begin, end);
        break;
      }
      threads.emplace_back(run_block, begin, end);
    }
    if (progress) {
      while (done.load(std::memory_order_relaxed) < count) {
        {
          const std::lock_guard lock(failure_mu);
          if (failure) break;
        }
        progress(done.load(std::memory_order_relaxed), count);
        std::this_thread::sleep_for(std::chrono::milliseconds(250));
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  if (progress) progress(count, count);

  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace cyclobox
