#include "spinsurf/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace spinsurf {
namespace {

std::atomic<int> g_threads{1};

template <typename T>
T pairwise(std::span<const T> v) {
  constexpr std::size_t kBlock = 32;
  if (v.size() <= kBlock) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

}  // namespace

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }

int thread_count() noexcept { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(thread_count());
  if (workers <= 1 || n < 4096) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
}

double pairwise_sum(std::span<const double> values) { return pairwise(values); }

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) { return pairwise(values); }

}  // namespace spinsurf
