#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace darksra {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream (a, b) of `base`: three chained SplitMix64 rounds.
/// Sweeps use a = grid index, b = replicate index.
constexpr std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t a,
                                           std::uint64_t b = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

/// Seedable generator with a platform-independent output sequence.
///
/// The engine is std::mt19937_64, whose output is fixed by the standard.
/// The standard library distributions are not, so the variates are
/// derived here: uniform() takes the top 53 bits, exponential() inverts
/// the CDF.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Exponential with the given mean.
  double exponential(double mean) noexcept { return -mean * std::log1p(-uniform()); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace darksra
