// Deterministic per-replication random streams and an order-preserving parallel map.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace crossings {

using Rng = std::mt19937_64;

/// Substream tags. Z and J draws come from different streams so that turning
/// jumps on or off leaves the Gaussian part of a replication unchanged.
enum class Substream : std::uint64_t { gaussian = 0, jumps = 1, pdmp = 2, auxiliary = 3 };

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of replication `index` on `sub`; a fixed hash of its arguments.
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, Substream sub) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ static_cast<std::uint64_t>(sub));
}

[[nodiscard]] inline Rng make_stream(std::uint64_t master, std::uint64_t index, Substream sub) {
  return Rng(stream_seed(master, index, sub));
}

/// Resolves a requested worker count: 0 means the hardware concurrency.
[[nodiscard]] inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1U : hw;
}

/// Evaluates fn(i) for i in [0, n) on `threads` workers and returns the
/// results in index order. The output depends only on fn, never on the
/// worker count or scheduling. The first exception thrown by fn is rethrown.
template <typename Fn>
[[nodiscard]] auto parallel_map(std::size_t n, unsigned threads, Fn&& fn) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<Result> out(n);
  const unsigned workers = std::max(1U, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace crossings
