#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "repopt/objective.hpp"
#include "repopt/rng.hpp"

namespace repopt {

// ReLU regression: h(x) = 0.5 * sum_i (relu(a_i.x) - b_i)^2.
//
// The objective admits a difference-of-convex split with
//   f(x) = 0.5 * sum_i relu(a_i.x)^2 + sum_i alpha_i * relu(a_i.x) + 0.5*||b||^2,
//   g(x) = sum_i beta_i * relu(a_i.x),
// where alpha_i = max(0, -b_i) and beta_i = max(0, b_i); both parts are convex
// (relu and relu^2 are convex, the coefficients are nonnegative) and f - g = h
// exactly.  The constant 0.5*||b||^2 is carried in f so that the identity holds
// without an offset; it does not affect any subdifferential.
//
// It is also the composite h(x) = c(Ax) with c(u) = 0.5*||relu(u) - b||^2,
// which is the form the prox-linear oracle works with.
struct ReluInstance final : Objective {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  // Generator metadata (not used by evaluation).
  double q_param = 0.0;              // fraction of targets forced negative
  double rho_b = 1.0;                // scale multiplier applied to b
  std::uint64_t seed = 0;
  std::vector<int> flipped_rows;     // rows where the target sign was flipped

  int m() const { return static_cast<int>(A.rows()); }
  int n() const { return static_cast<int>(A.cols()); }
  int dim() const override { return n(); }

  double value(const Eigen::VectorXd& x) const override;

  // Nonnegative DC coefficients derived from b.
  Eigen::VectorXd alpha() const { return (-b).cwiseMax(0.0); }
  Eigen::VectorXd beta() const { return b.cwiseMax(0.0); }

  // Convex parts of the split h = f1 - f2 and a subgradient of f2.  The
  // subgradient uses the selection relu'(u) = 1 for u > 0 and 0 otherwise.
  double f1_value(const Eigen::VectorXd& x) const;
  double f2_value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd f2_subgradient(const Eigen::VectorXd& x) const;

  // Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
};

// Random instance: A has i.i.d. standard normal entries, x* ~ N(0, I), and
// b = relu(A x*) + N(0, 0.1^2) noise.  A uniformly chosen ceil(q_param * m)
// subset of targets is forced negative (b_i <- -|b_i|), then the whole target
// vector is scaled by rho_b.  The flipped rows are recorded in the instance.
ReluInstance generate_relu(int m, int n, double q_param, double rho_b, Rng& rng);

}  // namespace repopt
