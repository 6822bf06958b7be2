#pragma once

#include <Eigen/Dense>

namespace repopt {

// Estimate of the spectral norm ||A||_2 by power iteration on A^T A.  The
// start vector is drawn from a fixed internal seed so the estimate is a pure
// function of A.  Returns 0 for an all-zero matrix.
double spectral_norm_estimate(const Eigen::MatrixXd& A, int iters = 50);

// Result of the l1-regularized least-squares inner solve.
struct L1SolveResult {
  Eigen::VectorXd u;
  double residual = 0.0;  // coordinatewise optimality residual at u (inf-norm)
  int iters = 0;
  bool converged = false;
};

// Minimizes 0.5*||Au - b||^2 - <g, u> + lambda*||u||_1 by accelerated
// proximal gradient (FISTA) with fixed step 1/lipschitz, starting from u0.
// Stops when the optimality residual — the coordinatewise distance of the
// negative smooth gradient to lambda * d|u_i|, maximized over coordinates —
// drops to tol, or after max_iter iterations.
//
// lipschitz must be an upper bound on ||A||_2^2; pass a value derived from
// spectral_norm_estimate with a small safety factor.
L1SolveResult solve_l1_regularized_lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                       const Eigen::VectorXd& g, double lambda,
                                       const Eigen::VectorXd& u0, double tol, int max_iter,
                                       double lipschitz);

// Coordinatewise optimality residual for the problem above at the point u:
// max_i dist(-grad_i, lambda * d|u_i|) where grad = A^T(Au - b) - g.
double l1_lsq_optimality_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& g, double lambda,
                                  const Eigen::VectorXd& u);

// Componentwise soft-threshold: sign(v_i) * max(|v_i| - tau, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau);

}  // namespace repopt
