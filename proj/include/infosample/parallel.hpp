#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace infosample {

/// Process-wide worker count used by the library's parallel loops (>= 1).
unsigned default_threads();
void set_default_threads(unsigned threads);

/// Overrides default_threads() on the calling thread for its lifetime.
class ScopedThreads {
 public:
  explicit ScopedThreads(unsigned threads);
  ~ScopedThreads();
  ScopedThreads(const ScopedThreads&) = delete;
  ScopedThreads& operator=(const ScopedThreads&) = delete;

 private:
  unsigned previous_;
};

/// Runs fn(chunk, begin, end) over `chunks` contiguous ranges of [0, n).
/// Chunk boundaries depend only on n and the chunk count, never on timing,
/// so callers that merge per-chunk results in chunk order are deterministic.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunks, unsigned threads, Fn&& fn) {
  chunks = std::max<std::size_t>(1, std::min(chunks, n == 0 ? 1 : n));
  auto bounds = [&](std::size_t c) { return n * c / chunks; };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t c = t; c < chunks; c += threads) fn(c, bounds(c), bounds(c + 1));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = default_threads()) {
  const std::size_t chunks = threads == 1 ? 1 : std::size_t{threads} * 4;
  parallel_chunks(n, chunks, threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) { fn(begin, end); });
}

}  // namespace infosample
