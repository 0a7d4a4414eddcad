#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iterator>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "core.hpp"

namespace levysheet {

/// Number of replicate chunks. Fixed so results do not depend on the thread count.
inline constexpr std::size_t kChunks = 64;

/// Worker count from LEVY_SHEET_THREADS (unset or 0: hardware concurrency).
inline unsigned thread_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("LEVY_SHEET_THREADS")) {
    try {
      n = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      n = 0;
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Independent engine for one chunk of a run seeded with `master`.
inline Engine chunk_engine(std::uint64_t master, std::size_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(chunk), 0x5eedu};
  return Engine(seq);
}

/// Splits n replicates into kChunks contiguous chunks, runs
/// `work(begin, end, engine)` for each, and returns the per-chunk results in
/// chunk order. Output is the same for any thread count.
template <class Work>
auto run_chunks(std::uint64_t master, std::size_t n, Work work) {
  using Result = decltype(work(std::size_t{}, std::size_t{}, std::declval<Engine&>()));
  std::vector<Result> results(kChunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= kChunks) return;
      const std::size_t begin = n * c / kChunks;
      const std::size_t end = n * (c + 1) / kChunks;
      try {
        Engine rng = chunk_engine(master, c);
        results[c] = work(begin, end, rng);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(thread_count(), kChunks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

/// n replicate draws, one `draw(engine)` call each, in deterministic order.
template <class Draw>
auto replicate(std::uint64_t master, std::size_t n, Draw draw) {
  using Item = decltype(draw(std::declval<Engine&>()));
  auto chunks = run_chunks(master, n, [&](std::size_t b, std::size_t e, Engine& rng) {
    std::vector<Item> out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) out.push_back(draw(rng));
    return out;
  });
  std::vector<Item> all;
  all.reserve(n);
  for (auto& c : chunks) std::move(c.begin(), c.end(), std::back_inserter(all));
  return all;
}

}  // namespace levysheet
