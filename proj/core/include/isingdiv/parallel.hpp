#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace isingdiv {

struct ChunkRange {
  std::uint64_t index;
  std::uint64_t begin;
  std::uint64_t end;
};

/// Splits [0, total) into fixed-size chunks and maps `fn` over them, possibly
/// on several worker threads. Partial results come back in chunk order, so a
/// caller that folds them sequentially gets bit-identical reductions no matter
/// how many workers ran. Chunk boundaries depend only on `chunk_size`.
template <typename Partial, typename Fn>
std::vector<Partial> map_chunks(std::uint64_t total, std::uint64_t chunk_size, int threads,
                                Fn&& fn) {
  const std::uint64_t n_chunks = chunk_size == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(n_chunks);
  if (n_chunks == 0) return partials;

  auto run_chunk = [&](std::uint64_t i) {
    ChunkRange r{i, i * chunk_size, std::min(total, (i + 1) * chunk_size)};
    partials[i] = fn(r);
  };

  if (threads <= 1 || n_chunks == 1) {
    for (std::uint64_t i = 0; i < n_chunks; ++i) run_chunk(i);
    return partials;
  }

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::uint64_t i = next.fetch_add(1);
      if (i >= n_chunks || failed.load()) return;
      try {
        run_chunk(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const int n_workers = static_cast<int>(std::min<std::uint64_t>(
      static_cast<std::uint64_t>(threads), n_chunks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return partials;
}

/// Default chunk width for sample loops and enumerations.
inline constexpr std::uint64_t kDefaultChunk = 1 << 14;

}  // namespace isingdiv
