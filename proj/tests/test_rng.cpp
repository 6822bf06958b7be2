#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "repopt/rng.hpp"

using repopt::hash64;
using repopt::mix64;
using repopt::Rng;

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

TEST_CASE("rng: identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(42), d(42);
  for (int i = 0; i < 100; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("rng: different seeds diverge") {
  Rng a(1), b(2);
  int differing = 0;
  for (int i = 0; i < 16; ++i)
    if (a.next_u64() != b.next_u64()) ++differing;
  CHECK(differing >= 15);
}

TEST_CASE("rng: uniform01 lies in [0,1) with 53-bit granularity") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double scaled = u * 0x1.0p53;
    CHECK(scaled == std::floor(scaled));  // exactly a multiple of 2^-53
  }
}

TEST_CASE("rng: uniform(lo, hi) stays inside the interval") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-3.0, 5.0);
    CHECK(u >= -3.0);
    CHECK(u < 5.0);
  }
}

TEST_CASE("rng: normal has approximately standard moments") {
  Rng rng(1234);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.normal();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);       // ~6 sigma for n = 1e5
  CHECK(std::abs(var - 1.0) < 0.03);  // ~6 sigma
}

TEST_CASE("rng: uniform_index covers {0..n-1} roughly uniformly") {
  Rng rng(5);
  const int n = 7, draws = 70000;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < draws; ++i) {
    const int idx = rng.uniform_index(n);
    REQUIRE(idx >= 0);
    REQUIRE(idx < n);
    ++counts[idx];
  }
  for (int c : counts) CHECK(std::abs(c - draws / n) < 500);
}

TEST_CASE("hash64: matches the documented mix64 folding") {
  const std::uint64_t a = 0x1234, b = 0xABCD;
  CHECK(hash64({a}) == mix64(kGolden + a));
  CHECK(hash64({a, b}) == mix64(mix64(kGolden + a) + b));
  CHECK(hash64({a, b, 7}) == mix64(mix64(mix64(kGolden + a) + b) + 7));
}

TEST_CASE("hash64: order sensitive and collision-free on small grids") {
  CHECK(hash64({1, 2}) != hash64({2, 1}));
  CHECK(hash64({0}) != hash64({0, 0}));
  std::vector<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 64; ++i)
    for (std::uint64_t j = 0; j < 64; ++j) seen.push_back(hash64({i, j}));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("rng: seed conditioning separates consecutive seeds") {
  // Consecutive raw seeds must not produce correlated first draws.
  Rng a(100), b(101);
  CHECK(a.next_u64() != b.next_u64());
}
