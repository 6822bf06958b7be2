#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "repopt/rng.hpp"
#include "repopt/samplers.hpp"

using repopt::DirectionSampler;
using repopt::Rng;
using repopt::sample_gauss_axis;
using repopt::sample_sphere;
using repopt::sample_step;
using repopt::StepSampler;

TEST_CASE("sphere samples are unit vectors of the right dimension") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd v = sample_sphere(rng, 8);
    REQUIRE(v.size() == 8);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("sphere sampling is deterministic in the seed") {
  Rng a(3), b(3);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd va = sample_sphere(a, 5);
    const Eigen::VectorXd vb = sample_sphere(b, 5);
    CHECK((va - vb).norm() == 0.0);
  }
}

TEST_CASE("sphere samples are isotropic (Monte Carlo)") {
  Rng rng(101);
  const int n = 5, draws = 20000;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < draws; ++i) {
    const Eigen::VectorXd v = sample_sphere(rng, n);
    mean += v;
    second += v * v.transpose();
  }
  mean /= draws;
  second /= draws;
  CHECK(mean.lpNorm<Eigen::Infinity>() < 0.02);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double expected = i == j ? 1.0 / n : 0.0;
      CHECK(std::abs(second(i, j) - expected) < 0.02);
    }
}

TEST_CASE("gauss-axis with mu = 1 has the uniform sphere law") {
  // Same distribution, different draw sequence: compare empirical CDFs of the
  // first coordinate over large samples.
  const int n = 4, draws = 20000;
  std::vector<double> s1, s2;
  s1.reserve(draws);
  s2.reserve(draws);
  Rng ra(21), rb(22);
  for (int i = 0; i < draws; ++i) {
    s1.push_back(sample_sphere(ra, n)[0]);
    s2.push_back(sample_gauss_axis(rb, n, 1.0)[0]);
  }
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  double sup_diff = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    while (j < s2.size() && s2[j] <= s1[i]) ++j;
    const double f1 = static_cast<double>(i + 1) / draws;
    const double f2 = static_cast<double>(j) / draws;
    sup_diff = std::max(sup_diff, std::abs(f1 - f2));
  }
  CHECK(sup_diff < 0.025);  // two-sample KS critical value at this n is ~0.014
}

TEST_CASE("gauss-axis with large mu concentrates on coordinate axes") {
  Rng rng(33);
  const int n = 10, draws = 1000;
  int dominated = 0;
  for (int i = 0; i < draws; ++i) {
    const Eigen::VectorXd v = sample_gauss_axis(rng, n, 300.0);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    if (v.cwiseAbs().maxCoeff() > 0.9) ++dominated;
  }
  // With sigma 300 on the chosen axis the dominant share is ~96%.
  CHECK(dominated > draws * 9 / 10);
}

TEST_CASE("gauss-axis visits every axis") {
  Rng rng(44);
  const int n = 6;
  std::vector<int> hits(n, 0);
  for (int i = 0; i < 600; ++i) {
    const Eigen::VectorXd v = sample_gauss_axis(rng, n, 300.0);
    int axis = 0;
    v.cwiseAbs().maxCoeff(&axis);
    ++hits[axis];
  }
  for (int h : hits) CHECK(h > 40);  // expected 100 per axis
}

TEST_CASE("step samples are uniform on [0, r]") {
  Rng rng(55);
  const double r = 3.0;
  const int draws = 20000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double t = sample_step(rng, r);
    CHECK(t >= 0.0);
    CHECK(t <= r);
    sum += t;
  }
  CHECK(std::abs(sum / draws - r / 2) < 0.03);
}

TEST_CASE("sampler descriptors forward to the free functions") {
  Rng a(9), b(9);
  const auto sph = DirectionSampler::Sphere(7);
  CHECK((sph.sample(a) - sample_sphere(b, 7)).norm() == 0.0);

  Rng c(9), d(9);
  const auto axis = DirectionSampler::GaussAxis(7, 50.0);
  CHECK((axis.sample(c) - sample_gauss_axis(d, 7, 50.0)).norm() == 0.0);

  Rng e(9), f(9);
  const StepSampler step{2.5};
  CHECK(step.sample(e) == sample_step(f, 2.5));
}
