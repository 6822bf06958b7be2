#include "repopt/inner_solvers.hpp"

#include <algorithm>
#include <cmath>

#include "repopt/rng.hpp"

namespace repopt {

double spectral_norm_estimate(const Eigen::MatrixXd& A, int iters) {
  const int n = static_cast<int>(A.cols());
  Rng rng(0x5eedULL);
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) v[j] = rng.normal();
  if (v.norm() < 1e-300) v.setOnes();
  v.normalize();

  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd w = A.transpose() * (A * v);
    const double norm = w.norm();
    if (norm < 1e-300) return 0.0;
    v = w / norm;
    sigma = std::sqrt(norm);
  }
  return sigma;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau) {
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) - tau;
    out[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
  }
  return out;
}

double l1_lsq_optimality_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& g, double lambda,
                                  const Eigen::VectorXd& u) {
  const Eigen::VectorXd grad = A.transpose() * (A * u - b) - g;
  double res = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    double d;
    if (u[i] != 0.0)
      d = std::abs(grad[i] + lambda * (u[i] > 0.0 ? 1.0 : -1.0));
    else
      d = std::max(0.0, std::abs(grad[i]) - lambda);
    res = std::max(res, d);
  }
  return res;
}

L1SolveResult solve_l1_regularized_lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                       const Eigen::VectorXd& g, double lambda,
                                       const Eigen::VectorXd& u0, double tol, int max_iter,
                                       double lipschitz) {
  L1SolveResult out;
  out.u = u0;

  const double step = 1.0 / std::max(lipschitz, 1e-300);
  Eigen::VectorXd u = u0;
  Eigen::VectorXd y = u0;
  double t = 1.0;

  for (int it = 0; it < max_iter; ++it) {
    out.residual = l1_lsq_optimality_residual(A, b, g, lambda, u);
    if (out.residual <= tol) {
      out.u = u;
      out.iters = it;
      out.converged = true;
      return out;
    }
    const Eigen::VectorXd grad = A.transpose() * (A * y - b) - g;
    const Eigen::VectorXd u_next = soft_threshold(y - step * grad, step * lambda);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = u_next + ((t - 1.0) / t_next) * (u_next - u);
    u = u_next;
    t = t_next;
    out.iters = it + 1;
  }

  out.u = u;
  out.residual = l1_lsq_optimality_residual(A, b, g, lambda, u);
  out.converged = out.residual <= tol;
  return out;
}

}  // namespace repopt
