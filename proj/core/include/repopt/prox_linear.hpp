#pragma once

#include <Eigen/Dense>

#include "repopt/oracle.hpp"
#include "repopt/relu.hpp"

namespace repopt {

// Configuration for the prox-linear oracle.  At x the oracle builds the
// regularized model
//   m(y) = c(Ay) + (rho_prox/2)*||y - x||^2,   c(u) = 0.5*||relu(u) - b||^2
// (the composition map y -> Ay is affine, so "linearizing" it is exact), and
// approximately minimizes it in up to three phases:
//
//  1. Fixed-step subgradient descent from y = x with step 1/(L_hat +
//     rho_prox), keeping the best model-value iterate of the sweep (the
//     iterates themselves are not safeguarded; relu kinks make the sweep
//     non-monotone).
//  2. If the sweep finds nothing better than y = x: one exact steepest-
//     descent step.  The model's directional derivative at y is minimized
//     over the unit ball via box-constrained least squares on the rows
//     sitting in the certifier's kink band, so a fixed point of this phase
//     is a point the d-stationarity certifier accepts with margin.
//  3. If that improves only below measurement resolution: a pinned Newton
//     "parking" step onto the kink pattern — band rows are assigned their
//     piece from the steepest-descent dual (pinned to the kink, released
//     into the rising piece, or freed into the flat piece) and the
//     resulting equality-constrained quadratic is solved exactly.  This is
//     the only move that can place a row exactly on its kink; first-order
//     steps approach kink-supported stationary points asymptotically and
//     freeze a sub-band distance away, where the certifier flags a gap no
//     single-direction step can realize.
//
// Step acceptance is noise-aware: true model decreases near a parked point
// fall below what double-precision evaluation can resolve, so each trial
// derives an error bound alongside its value and only believes decreases
// that clear it; the full Newton jump may be accepted as neutral inside the
// bound.  Every proposal satisfies m(z) <= h(x), and hence
// h(x) - h(z) >= (rho_prox/2)*||z - x||^2, up to that same measurement
// resolution (a few ulp of the per-row terms).
struct ProxLinearConfig {
  double rho_prox = 0.1;
  int inner_max_iter = 200;
  // Early stop once the descent step is shorter than this (absolute norm).
  double inner_tol = 1e-10;

  // Throws std::invalid_argument on nonpositive fields.
  void validate() const;
};

// Holds a reference to the instance; the instance must outlive the oracle.
class ReluProxLinearOracle final : public Oracle {
 public:
  ReluProxLinearOracle(const ReluInstance& inst, ProxLinearConfig cfg);

  OracleProposal propose(const Eigen::VectorXd& x) const override;

  // Model value m(y) for the model anchored at x (exposed for tests).
  double model_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  const ReluInstance& inst_;
  ProxLinearConfig cfg_;
  double step_ = 0.0;  // 1 / (L_hat + rho_prox), L_hat = ||A||_2^2 estimate
};

// One-shot convenience for tests and small experiments.
OracleProposal prox_linear_propose(const ReluInstance& inst, const Eigen::VectorXd& x,
                                   const ProxLinearConfig& cfg);

}  // namespace repopt
