#pragma once

// Deterministic trial fan-out. Trial i derives everything from its index
// (callers seed with base + i) and writes slot i, so the result vector is
// identical for any worker count.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ran {

inline unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

template <typename Row, typename Fn>
std::vector<Row> run_trials(std::uint64_t trials, unsigned threads, Fn&& fn) {
  std::vector<Row> rows(trials);
  threads = resolve_threads(threads);
  if (threads <= 1 || trials <= 1) {
    for (std::uint64_t i = 0; i < trials; ++i) rows[i] = fn(i);
    return rows;
  }
  if (threads > trials) threads = static_cast<unsigned>(trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        rows[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

}  // namespace ran
