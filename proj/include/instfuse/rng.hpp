#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace instfuse {

// Named randomness streams. Every stochastic component derives its own
// engine from (master seed, stream, indices), so e.g. changing the
// false-positive rate never perturbs object placement draws.
enum class Stream : std::uint64_t {
  Objects = 1,
  Agents = 2,
  Visibility = 3,
  BoxNoise = 4,
  Score = 5,
  FeatureNoise = 6,
  FalsePositives = 7,
  Points = 8,
  PoseNoise = 9,
  Frame = 10,
  Placement = 11,
  Embed = 12,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t seed, Stream s,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  return derive_seed(seed, static_cast<std::uint64_t>(s), b, c);
}

// Deterministic RNG with explicit distribution code, so that a stream's
// draw sequence depends only on the seed (not on stdlib internals).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return (engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (one value per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  // Knuth multiplication method; intended for small rates (< ~50).
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  // Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) {
    return n == 0 ? 0 : engine_() % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace instfuse
