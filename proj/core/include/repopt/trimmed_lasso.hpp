#pragma once

#include <vector>

#include <Eigen/Core>

#include "repopt/objective.hpp"
#include "repopt/rng.hpp"

namespace repopt {

/// Sparse regression with the trimmed penalty:
///   h(x) = 0.5 ||Ax - b||^2 + lambda (||x||_1 - top_k(|x|)),
/// a difference of the convex parts
///   f1(x) = 0.5 ||Ax - b||^2 + lambda ||x||_1,   f2(x) = lambda top_k(|x|).
struct TrimmedLassoInstance final : public Objective {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double lambda = 1.0;
  int k = 1;

  // Generator metadata; carried through serialization.
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> planted_support;

  int m() const { return static_cast<int>(A.rows()); }
  int n() const { return static_cast<int>(A.cols()); }

  int dim() const override { return n(); }
  double value(const Eigen::VectorXd& x) const override;

  double f1_value(const Eigen::VectorXd& x) const;
  double f2_value(const Eigen::VectorXd& x) const;

  /// A subgradient of f2 at x: lambda * sign(x_i) on a top-k magnitude index
  /// set (ties broken by lowest index), zero elsewhere; sign(0) = 0.
  Eigen::VectorXd f2_subgradient(const Eigen::VectorXd& x) const;

  void validate() const;
};

/// Random instance: A with i.i.d. N(0, 1/m) entries (columns of unit norm in
/// expectation), a planted solution with exactly k nonzeros of value +-1 on a
/// uniformly chosen support, and b = A x* + noise.
TrimmedLassoInstance generate_trimmed_lasso(int m, int n, int k, double lambda, double noise_std,
                                            Rng& rng);

}  // namespace repopt
