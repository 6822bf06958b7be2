#include <doctest.h>

#include <algorithm>
#include <vector>

#include <Eigen/Core>

#include "repopt/rng.hpp"
#include "repopt/top_k.hpp"

using repopt::Rng;
using repopt::top_k_indices;
using repopt::top_k_sum;

TEST_CASE("top_k_sum on hand examples") {
  Eigen::VectorXd v(4);
  v << 3.0, -1.0, 5.0, 2.0;
  CHECK(top_k_sum(v, 0) == 0.0);
  CHECK(top_k_sum(v, 1) == 5.0);
  CHECK(top_k_sum(v, 2) == 8.0);
  CHECK(top_k_sum(v, 4) == 9.0);
}

TEST_CASE("top_k_indices breaks ties by lowest index and sorts ascending") {
  Eigen::VectorXd v(4);
  v << 2.0, 5.0, 5.0, 1.0;
  CHECK(top_k_indices(v, 1) == std::vector<int>{1});
  CHECK(top_k_indices(v, 2) == std::vector<int>{1, 2});
  CHECK(top_k_indices(v, 3) == std::vector<int>{0, 1, 2});

  Eigen::VectorXd w(3);
  w << 7.0, 7.0, 7.0;
  CHECK(top_k_indices(w, 2) == std::vector<int>{0, 1});
}

TEST_CASE("top_k agrees with a sort-based oracle on random inputs") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + rng.uniform_index(12);
    const int k = rng.uniform_index(n + 1);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    // Occasionally force exact ties.
    if (n >= 2 && rng.uniform01() < 0.5) v[n - 1] = v[0];

    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double expect = 0.0;
    for (int i = 0; i < k; ++i) expect += sorted[i];
    CHECK(top_k_sum(v, k) == doctest::Approx(expect).epsilon(1e-12));

    const std::vector<int> idx = top_k_indices(v, k);
    REQUIRE(static_cast<int>(idx.size()) == k);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    double via_indices = 0.0;
    for (int i : idx) {
      REQUIRE(i >= 0);
      REQUIRE(i < n);
      via_indices += v[i];
    }
    CHECK(via_indices == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("top_k edge cases") {
  Eigen::VectorXd empty(0);
  CHECK(top_k_sum(empty, 0) == 0.0);
  CHECK(top_k_indices(empty, 0).empty());

  Eigen::VectorXd one(1);
  one << -4.0;
  CHECK(top_k_sum(one, 1) == -4.0);
  CHECK(top_k_indices(one, 1) == std::vector<int>{0});
}
