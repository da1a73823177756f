#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace mcover {

// splitmix64 finalizer over (root, stream); trial i of a run seeded with root
// always gets the same stream regardless of how trials are scheduled.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // 53 random mantissa bits, in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform01() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates from the back. Swap targets are drawn a few steps ahead (in the
// same sequence) so their cache lines can be fetched early on large arrays.
template <class T>
void shuffle(std::span<T> values, Rng& rng) {
  constexpr std::size_t kAhead = 8;
  std::size_t ring[kAhead];
  const std::size_t n = values.size();
  for (std::size_t k = 0; k < kAhead && n - k > 1; ++k) {
    ring[k] = rng.below(n - k);
    __builtin_prefetch(&values[ring[k]]);
  }
  for (std::size_t i = n, k = 0; i > 1; --i, ++k) {
    const std::size_t j = ring[k % kAhead];
    if (i > kAhead + 1) {
      ring[k % kAhead] = rng.below(i - kAhead);
      __builtin_prefetch(&values[ring[k % kAhead]]);
    }
    std::swap(values[i - 1], values[j]);
  }
}

// Moves a uniform random sample of `count` elements into the prefix, in
// uniformly random order (the first `count` steps of a forward Fisher-Yates).
template <class T>
void partial_shuffle(std::span<T> values, std::size_t count, Rng& rng) {
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < count && i + 1 < n; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(values[i], values[j]);
  }
}

}  // namespace mcover
