#pragma once

#include <Eigen/Core>

#include "repopt/rng.hpp"

namespace repopt {

/// Uniform draw from the unit sphere S^{n-1}: a standard Gaussian vector
/// normalized to unit length. Degenerate draws with norm below 1e-12 are
/// redrawn.
Eigen::VectorXd sample_sphere(Rng& rng, int n);

/// Axis-biased sphere draw: pick a coordinate index uniformly, inflate its
/// Gaussian standard deviation to mu (mu >= 1), normalize. mu = 1 recovers
/// the uniform sphere law.
Eigen::VectorXd sample_gauss_axis(Rng& rng, int n, double mu);

/// Uniform candidate step size on [0, r].
double sample_step(Rng& rng, double r);

/// Immutable direction-distribution descriptor. Generator state is owned by
/// the caller, so one descriptor can serve many concurrent runs.
struct DirectionSampler {
  enum class Kind { kSphere, kGaussAxis };

  Kind kind = Kind::kSphere;
  int n = 0;
  double mu = 1.0;  // gauss-axis only

  static DirectionSampler Sphere(int n) { return {Kind::kSphere, n, 1.0}; }
  static DirectionSampler GaussAxis(int n, double mu) { return {Kind::kGaussAxis, n, mu}; }

  Eigen::VectorXd sample(Rng& rng) const {
    return kind == Kind::kSphere ? sample_sphere(rng, n) : sample_gauss_axis(rng, n, mu);
  }
};

struct StepSampler {
  double r = 1.0;

  double sample(Rng& rng) const { return sample_step(rng, r); }
};

}  // namespace repopt
