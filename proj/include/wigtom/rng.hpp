#pragma once

#include <cmath>
#include <cstdint>

namespace wigtom::rng {

// Counter-based generation: every random quantity is a pure function of
// (seed, purpose, stream, counter), so work items can run in any order on
// any number of workers and still reproduce bit-identical results.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

/// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Domain separation tags, one per consumer of randomness.
enum class Purpose : std::uint64_t {
  LoNoise = 0x10c0ull,
  Shots = 0x5407ull,
  ProblemGen = 0x96e0ull,
};

/// A short deterministic stream of draws addressed by (seed, purpose,
/// stream, counter). Successive draws advance an internal sub-counter.
class Stream {
 public:
  Stream(std::uint64_t seed, Purpose purpose, std::uint64_t stream,
         std::uint64_t counter) {
    base_ = mix64(seed);
    base_ = mix64(base_ ^ static_cast<std::uint64_t>(purpose));
    base_ = mix64(base_ ^ stream);
    base_ = mix64(base_ ^ counter);
  }

  std::uint64_t next_u64() { return mix64(base_ + (++i_) * kGolden); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Gaussian draw via Box-Muller; consumes exactly two uniforms.
  double normal(double mean, double stddev) {
    // u1 in (0, 1] so the log is finite.
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586476925287 * u2);
  }

  /// Binomial(n, p) by CDF inversion. Drawn in chunks small enough that
  /// (1-p)^chunk stays representable; expected cost O(n p + n/chunk).
  std::uint64_t binomial(std::uint64_t n, double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);
    constexpr std::uint64_t kChunk = 500;
    std::uint64_t total = 0;
    while (n > 0) {
      std::uint64_t c = n < kChunk ? n : kChunk;
      total += binomial_small(c, p);
      n -= c;
    }
    return total;
  }

 private:
  std::uint64_t binomial_small(std::uint64_t n, double p) {
    const double u = uniform01();
    const double odds = p / (1.0 - p);
    double pmf = std::pow(1.0 - p, static_cast<double>(n));
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u > cdf && k < n) {
      pmf *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
      cdf += pmf;
      ++k;
    }
    return k;
  }

  std::uint64_t base_ = 0;
  std::uint64_t i_ = 0;
};

}  // namespace wigtom::rng
