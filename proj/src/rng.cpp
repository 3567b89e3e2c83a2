#include "lsasim/types.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

namespace lsasim {

namespace {

// splitmix64 finalizer: decorrelates related seeds before they reach the
// engine, so (seed, stream) pairs that differ in one bit give unrelated
// sequences.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mixStream(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL));
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)), normal_(0.0, 1.0) {}

Rng Rng::derive(std::uint64_t stream) const { return Rng(mixStream(seed_, stream)); }

Rng Rng::derive(std::uint64_t stream, std::uint64_t substream) const {
  return Rng(mixStream(mixStream(seed_, stream), substream));
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::gaussian() { return normal_(engine_); }

Complex Rng::complexGaussian() {
  // Sequence the two draws explicitly; argument evaluation order is not
  // specified and determinism depends on it.
  const double re = gaussian();
  const double im = gaussian();
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return {re * inv_sqrt2, im * inv_sqrt2};
}

void parallelFor(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = static_cast<int>(std::min<std::uint64_t>(hw == 0 ? 1 : hw, static_cast<std::uint64_t>(n)));

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto guarded = [&](int i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers <= 1) {
    for (int i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) guarded(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lsasim
