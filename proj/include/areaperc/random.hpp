#pragma once

#include <cstdint>
#include <random>

namespace areaperc {

/// Random stream used by every chain.
///
/// Only the raw engine output is used (the standard fixes mt19937_64's
/// sequence); the conversions to doubles and integers below are spelled out
/// here so that a seed reproduces the same run on any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Poisson variate, by counting unit-rate exponential arrivals. O(mean).
  std::uint64_t poisson(double mean);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-replicate stream seed.
///
/// h = mix64(master); then h = mix64(h ^ bits(beta)), mix64(h ^ bits(z)),
/// mix64(h ^ replicate), where bits() is the IEEE-754 binary64 pattern.
/// -0.0 is folded into +0.0 first.
std::uint64_t stream_seed(std::uint64_t master_seed, double beta, double z,
                          std::uint64_t replicate);

}  // namespace areaperc
