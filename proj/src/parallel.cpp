#include "infosample/parallel.hpp"

#include <atomic>

namespace infosample {
namespace {
std::atomic<unsigned> g_threads{1};
thread_local unsigned t_override = 0;
}  // namespace

unsigned default_threads() {
  return t_override ? t_override : g_threads.load(std::memory_order_relaxed);
}

void set_default_threads(unsigned threads) {
  g_threads.store(std::max(1u, threads), std::memory_order_relaxed);
}

ScopedThreads::ScopedThreads(unsigned threads) : previous_(t_override) {
  t_override = std::max(1u, threads);
}

ScopedThreads::~ScopedThreads() { t_override = previous_; }

}  // namespace infosample
