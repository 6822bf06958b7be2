#pragma once

#include <vector>

#include <Eigen/Core>

#include "repopt/objective.hpp"
#include "repopt/rng.hpp"

namespace repopt {

/// Least trimmed squares:
///   h(x) = 0.5 ||Ax - b||^2 - 0.5 top_q((Ax - b)^2),
/// i.e. the fit after discarding the q worst residuals. DC parts:
///   f1(x) = 0.5 ||Ax - b||^2 (smooth),   f2(x) = 0.5 top_q((Ax - b)^2).
struct LtsInstance final : public Objective {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  int q = 1;

  // Generator metadata.
  double sigma_clean = 0.0;
  double outlier_std = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> outlier_rows;

  int m() const { return static_cast<int>(A.rows()); }
  int n() const { return static_cast<int>(A.cols()); }

  int dim() const override { return n(); }
  double value(const Eigen::VectorXd& x) const override;

  double f1_value(const Eigen::VectorXd& x) const;
  double f2_value(const Eigen::VectorXd& x) const;

  /// A subgradient of f2 at x: A^T w with w = residual on a top-q
  /// squared-residual index set (lowest-index ties), zero elsewhere.
  Eigen::VectorXd f2_subgradient(const Eigen::VectorXd& x) const;

  void validate() const;
};

/// Random instance: A i.i.d. standard normal, dense planted x* ~ N(0, I),
/// clean rows b_i = a_i.x* + N(0, sigma_clean^2), and q uniformly chosen rows
/// replaced by b_i = a_i.x* + N(0, outlier_std^2).
LtsInstance generate_lts(int m, int n, int q, double sigma_clean, double outlier_std, Rng& rng);

}  // namespace repopt
