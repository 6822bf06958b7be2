#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace repopt {

/// SplitMix64 finalizer. Used both to condition raw seeds and as the
/// published mixing step of hash64().
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Order-sensitive combination of 64-bit words into one seed:
///   h = mix64(C + w0); h = mix64(h + w1); ...
/// with C the golden-ratio constant. hash64({a,b}) != hash64({b,a}).
std::uint64_t hash64(std::initializer_list<std::uint64_t> words);

/// Deterministic random source. All stochastic code in this project draws
/// through this class so that a (seed, call sequence) pair fully determines
/// every sample, independent of the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed + 0x9E3779B97F4A7C15ULL)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via the Marsaglia polar method (no libm trig).
  double normal();

  /// Uniform index in {0, ..., n-1}; n must be positive.
  int uniform_index(int n) {
    const int i = static_cast<int>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace repopt
