#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "repopt/lts.hpp"
#include "repopt/relu.hpp"
#include "repopt/rng.hpp"
#include "repopt/trimmed_lasso.hpp"

using repopt::generate_lts;
using repopt::generate_relu;
using repopt::generate_trimmed_lasso;
using repopt::LtsInstance;
using repopt::ReluInstance;
using repopt::Rng;
using repopt::TrimmedLassoInstance;

namespace {

Eigen::VectorXd random_vector(Rng& rng, int n, double scale = 1.0) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = scale * rng.normal();
  return x;
}

}  // namespace

TEST_CASE("trimmed lasso value on hand examples") {
  TrimmedLassoInstance inst;
  inst.A = Eigen::MatrixXd::Identity(2, 2);
  inst.b = Eigen::VectorXd(2);
  inst.b << 1.0, 2.0;
  inst.lambda = 0.5;
  inst.k = 1;

  Eigen::VectorXd x(2);
  x << 3.0, 0.0;  // residual (2, -2); penalty 0.5*(3 - 3) = 0
  CHECK(inst.value(x) == doctest::Approx(4.0));

  x << 3.0, 1.0;  // residual (2, -1); penalty 0.5*(4 - 3) = 0.5
  CHECK(inst.value(x) == doctest::Approx(3.0));
}

TEST_CASE("lts value on hand examples") {
  LtsInstance inst;
  inst.A = Eigen::MatrixXd::Identity(2, 2);
  inst.b = Eigen::VectorXd(2);
  inst.b << 3.0, 1.0;
  inst.q = 1;

  const Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  // Full fit 0.5*(9+1); the worst residual (9) is trimmed.
  CHECK(inst.value(x) == doctest::Approx(0.5));
}

TEST_CASE("relu value on hand examples") {
  ReluInstance inst;
  inst.A = Eigen::MatrixXd(2, 1);
  inst.A << 1.0, -1.0;
  inst.b = Eigen::VectorXd(2);
  inst.b << 1.0, -1.0;

  Eigen::VectorXd x(1);
  x << 2.0;
  // relu(2) = 2 -> (2-1)^2/2; relu(-2) = 0 -> (0+1)^2/2.
  CHECK(inst.value(x) == doctest::Approx(1.0));

  CHECK(inst.alpha()[0] == 0.0);
  CHECK(inst.alpha()[1] == 1.0);
  CHECK(inst.beta()[0] == 1.0);
  CHECK(inst.beta()[1] == 0.0);
}

TEST_CASE("DC identity f1 - f2 = h for every family") {
  Rng rng(303);
  TrimmedLassoInstance tl = generate_trimmed_lasso(12, 20, 4, 0.7, 0.1, rng);
  LtsInstance lts = generate_lts(15, 8, 3, 1.0, 5.0, rng);
  ReluInstance relu = generate_relu(14, 6, 0.3, 2.0, rng);

  for (int trial = 0; trial < 50; ++trial) {
    {
      const Eigen::VectorXd x = random_vector(rng, tl.n(), 2.0);
      const double h = tl.value(x);
      CHECK(tl.f1_value(x) - tl.f2_value(x) ==
            doctest::Approx(h).epsilon(1e-10));
    }
    {
      const Eigen::VectorXd x = random_vector(rng, lts.n(), 2.0);
      const double h = lts.value(x);
      CHECK(lts.f1_value(x) - lts.f2_value(x) ==
            doctest::Approx(h).epsilon(1e-10));
    }
    {
      const Eigen::VectorXd x = random_vector(rng, relu.n(), 2.0);
      const double h = relu.value(x);
      CHECK(relu.f1_value(x) - relu.f2_value(x) ==
            doctest::Approx(h).epsilon(1e-10));
    }
  }
}

TEST_CASE("f2 subgradients satisfy the convexity inequality") {
  // g in df2(x) requires f2(y) >= f2(x) + <g, y - x> for all y.
  Rng rng(404);
  TrimmedLassoInstance tl = generate_trimmed_lasso(10, 15, 3, 1.1, 0.1, rng);
  LtsInstance lts = generate_lts(12, 6, 4, 1.0, 5.0, rng);
  ReluInstance relu = generate_relu(10, 5, 0.4, 1.5, rng);

  for (int trial = 0; trial < 100; ++trial) {
    {
      const Eigen::VectorXd x = random_vector(rng, tl.n());
      const Eigen::VectorXd y = random_vector(rng, tl.n(), 3.0);
      const Eigen::VectorXd g = tl.f2_subgradient(x);
      CHECK(tl.f2_value(y) >= tl.f2_value(x) + g.dot(y - x) - 1e-9);
    }
    {
      const Eigen::VectorXd x = random_vector(rng, lts.n());
      const Eigen::VectorXd y = random_vector(rng, lts.n(), 3.0);
      const Eigen::VectorXd g = lts.f2_subgradient(x);
      CHECK(lts.f2_value(y) >= lts.f2_value(x) + g.dot(y - x) - 1e-9);
    }
    {
      const Eigen::VectorXd x = random_vector(rng, relu.n());
      const Eigen::VectorXd y = random_vector(rng, relu.n(), 3.0);
      const Eigen::VectorXd g = relu.f2_subgradient(x);
      CHECK(relu.f2_value(y) >= relu.f2_value(x) + g.dot(y - x) - 1e-9);
    }
  }
}

TEST_CASE("generators are deterministic in the rng state") {
  Rng a(99), b(99);
  const TrimmedLassoInstance t1 = generate_trimmed_lasso(8, 10, 2, 1.0, 0.1, a);
  const TrimmedLassoInstance t2 = generate_trimmed_lasso(8, 10, 2, 1.0, 0.1, b);
  CHECK((t1.A - t2.A).norm() == 0.0);
  CHECK((t1.b - t2.b).norm() == 0.0);
  CHECK(t1.planted_support == t2.planted_support);

  Rng c(98), d(98);
  const LtsInstance l1 = generate_lts(9, 4, 2, 1.0, 8.0, c);
  const LtsInstance l2 = generate_lts(9, 4, 2, 1.0, 8.0, d);
  CHECK((l1.A - l2.A).norm() == 0.0);
  CHECK((l1.b - l2.b).norm() == 0.0);
  CHECK(l1.outlier_rows == l2.outlier_rows);

  Rng e(97), f(97);
  const ReluInstance r1 = generate_relu(9, 4, 0.25, 2.0, e);
  const ReluInstance r2 = generate_relu(9, 4, 0.25, 2.0, f);
  CHECK((r1.A - r2.A).norm() == 0.0);
  CHECK((r1.b - r2.b).norm() == 0.0);
  CHECK(r1.flipped_rows == r2.flipped_rows);
}

TEST_CASE("trimmed lasso generator plants the advertised structure") {
  Rng rng(17);
  const int m = 40, n = 30, k = 5;
  const TrimmedLassoInstance inst = generate_trimmed_lasso(m, n, k, 1.0, 0.1, rng);
  CHECK(inst.m() == m);
  CHECK(inst.n() == n);
  CHECK(inst.noise_std == 0.1);

  REQUIRE(static_cast<int>(inst.planted_support.size()) == k);
  std::set<int> support(inst.planted_support.begin(), inst.planted_support.end());
  CHECK(static_cast<int>(support.size()) == k);
  for (int i : inst.planted_support) {
    CHECK(i >= 0);
    CHECK(i < n);
  }
  CHECK(std::is_sorted(inst.planted_support.begin(), inst.planted_support.end()));

  // Entries are N(0, 1/m): the empirical second moment over m*n = 1200
  // entries should sit near 1/m.
  const double mean_sq = inst.A.squaredNorm() / (m * n);
  CHECK(mean_sq == doctest::Approx(1.0 / m).epsilon(0.2));
}

TEST_CASE("lts generator marks q outlier rows") {
  Rng rng(18);
  const int m = 40, n = 30, q = 6;
  const LtsInstance inst = generate_lts(m, n, q, 4.0, 10.0, rng);
  CHECK(inst.q == q);
  CHECK(inst.sigma_clean == 4.0);
  CHECK(inst.outlier_std == 10.0);

  REQUIRE(static_cast<int>(inst.outlier_rows.size()) == q);
  std::set<int> rows(inst.outlier_rows.begin(), inst.outlier_rows.end());
  CHECK(static_cast<int>(rows.size()) == q);
  for (int i : inst.outlier_rows) {
    CHECK(i >= 0);
    CHECK(i < m);
  }

  // A is standard normal: second moment near 1.
  const double mean_sq = inst.A.squaredNorm() / (m * n);
  CHECK(mean_sq == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("relu generator flips ceil(q*m) targets negative") {
  Rng rng(19);
  const int m = 25, n = 10;
  const double q = 0.3, rho = 2.0;
  const ReluInstance inst = generate_relu(m, n, q, rho, rng);
  CHECK(inst.q_param == q);
  CHECK(inst.rho_b == rho);

  const int expected_flips = static_cast<int>(std::ceil(q * m));
  REQUIRE(static_cast<int>(inst.flipped_rows.size()) == expected_flips);
  std::set<int> rows(inst.flipped_rows.begin(), inst.flipped_rows.end());
  CHECK(static_cast<int>(rows.size()) == expected_flips);
  for (int i : inst.flipped_rows) {
    CHECK(i >= 0);
    CHECK(i < m);
    CHECK(inst.b[i] <= 0.0);  // forced negative, then scaled by rho > 0
  }
}

TEST_CASE("instance validation rejects inconsistent shapes") {
  TrimmedLassoInstance tl;
  tl.A = Eigen::MatrixXd::Identity(3, 3);
  tl.b = Eigen::VectorXd::Zero(2);  // mismatched
  tl.lambda = 1.0;
  tl.k = 1;
  CHECK_THROWS_AS(tl.validate(), std::invalid_argument);

  LtsInstance lts;
  lts.A = Eigen::MatrixXd::Identity(3, 3);
  lts.b = Eigen::VectorXd::Zero(3);
  lts.q = 5;  // q > m
  CHECK_THROWS_AS(lts.validate(), std::invalid_argument);

  ReluInstance relu;
  relu.A = Eigen::MatrixXd::Identity(3, 3);
  relu.b = Eigen::VectorXd::Zero(4);  // mismatched
  CHECK_THROWS_AS(relu.validate(), std::invalid_argument);
}
