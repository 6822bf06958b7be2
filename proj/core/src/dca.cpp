#include "repopt/dca.hpp"

#include <cmath>
#include <stdexcept>

#include "repopt/inner_solvers.hpp"

namespace repopt {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

void DcaOracleConfig::validate() const {
  if (!(inner_tol > 0.0)) throw std::invalid_argument("dca: inner_tol must be positive");
  if (inner_max_iter < 1) throw std::invalid_argument("dca: inner_max_iter must be positive");
  if (mu_strong < 0.0) throw std::invalid_argument("dca: mu_strong must be nonnegative");
}

TrimmedLassoDcaOracle::TrimmedLassoDcaOracle(const TrimmedLassoInstance& inst, DcaOracleConfig cfg)
    : inst_(inst), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.inner_solver != DcaOracleConfig::InnerSolver::kProximalGradientL1)
    throw std::invalid_argument("dca: trimmed lasso requires the proximal-gradient inner solver");

  const int m = inst_.m();
  const int n = inst_.n();
  if (cfg_.mu_strong > 0.0) {
    // Fold the (mu/2)*||u||^2 term into the quadratic by stacking sqrt(mu)*I.
    A_solve_.setZero(m + n, n);
    A_solve_.topRows(m) = inst_.A;
    const double s = std::sqrt(cfg_.mu_strong);
    for (int j = 0; j < n; ++j) A_solve_(m + j, j) = s;
    b_solve_.setZero(m + n);
    b_solve_.head(m) = inst_.b;
  } else {
    A_solve_ = inst_.A;
    b_solve_ = inst_.b;
  }
  const double sigma = spectral_norm_estimate(A_solve_);
  lipschitz_ = sigma * sigma * (1.0 + 1e-6) + 1e-12;
}

OracleProposal TrimmedLassoDcaOracle::propose(const Eigen::VectorXd& x) const {
  OracleProposal out;

  // Subgradient of the linearized part: f2 = lambda*top_k(|.|) plus the
  // optional strong-convexity shift.
  Eigen::VectorXd g = inst_.f2_subgradient(x);
  if (cfg_.mu_strong > 0.0) g += cfg_.mu_strong * x;

  const Eigen::VectorXd& u0 = warm_.size() == x.size() ? warm_ : x;
  const L1SolveResult sol = solve_l1_regularized_lsq(A_solve_, b_solve_, g, inst_.lambda, u0,
                                                     cfg_.inner_tol, cfg_.inner_max_iter,
                                                     lipschitz_);
  out.z = sol.u;

  // Post-hoc guarantee on the subproblem objective: the proposal must not be
  // worse than staying at x.  A failed solve degrades to z = x.
  const auto subproblem_value = [&](const Eigen::VectorXd& u) {
    return 0.5 * (A_solve_ * u - b_solve_).squaredNorm() - g.dot(u) +
           inst_.lambda * u.lpNorm<1>();
  };
  if (!all_finite(out.z) || subproblem_value(out.z) > subproblem_value(x)) {
    out.z = x;
    out.anomaly = true;
  }

  warm_ = out.z;
  return out;
}

LtsDcaOracle::LtsDcaOracle(const LtsInstance& inst, DcaOracleConfig cfg)
    : inst_(inst), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.inner_solver != DcaOracleConfig::InnerSolver::kClosedFormQuadratic)
    throw std::invalid_argument("dca: least trimmed squares requires the quadratic inner solver");

  const int n = inst_.n();
  normal_matrix_ = inst_.A.transpose() * inst_.A;
  for (int j = 0; j < n; ++j) normal_matrix_(j, j) += cfg_.mu_strong;
  ldlt_.compute(normal_matrix_);
  Atb_ = inst_.A.transpose() * inst_.b;
}

OracleProposal LtsDcaOracle::propose(const Eigen::VectorXd& x) const {
  OracleProposal out;

  Eigen::VectorXd g = inst_.f2_subgradient(x);
  if (cfg_.mu_strong > 0.0) g += cfg_.mu_strong * x;
  const Eigen::VectorXd rhs = Atb_ + g;

  out.z = ldlt_.solve(rhs);

  // A singular (or numerically unreliable) normal-equations solve falls back
  // to a ridge-regularized system; the proposal is then flagged.
  const double rhs_scale = std::max(1.0, rhs.norm());
  if (ldlt_.info() != Eigen::Success || !all_finite(out.z) ||
      (normal_matrix_ * out.z - rhs).norm() > 1e-8 * rhs_scale) {
    Eigen::MatrixXd ridged = normal_matrix_;
    for (int j = 0; j < ridged.cols(); ++j) ridged(j, j) += 1e-12;
    out.z = ridged.ldlt().solve(rhs);
    out.anomaly = true;
  }

  // Post-hoc guarantee on the subproblem objective phi(u) = 0.5 u'Mu - rhs'u.
  // Evaluating phi at both points and subtracting cancels catastrophically once
  // z is near the fixed point (the true decrease falls below the rounding noise
  // of two O(|phi|) values, which would freeze the outer iteration several
  // orders of magnitude before the certifier tolerance).  Expand the difference
  // instead: with d = x - z,
  //   phi(x) - phi(z) = 0.5 d'Md + (Mz - rhs)'d,
  // whose rounding error scales with ||d||, not with |phi|.
  if (!all_finite(out.z)) {
    out.z = x;
    out.anomaly = true;
    return out;
  }
  const Eigen::VectorXd d = x - out.z;
  const Eigen::VectorXd solve_residual = normal_matrix_ * out.z - rhs;
  const double decrease = 0.5 * d.dot(normal_matrix_ * d) + solve_residual.dot(d);
  if (decrease < -1e-9 * std::max(1.0, rhs_scale * d.norm())) {
    out.z = x;
    out.anomaly = true;
  }
  return out;
}

OracleProposal dca_propose(const TrimmedLassoInstance& inst, const Eigen::VectorXd& x,
                           const DcaOracleConfig& cfg) {
  DcaOracleConfig local = cfg;
  local.inner_solver = DcaOracleConfig::InnerSolver::kProximalGradientL1;
  return TrimmedLassoDcaOracle(inst, local).propose(x);
}

OracleProposal dca_propose(const LtsInstance& inst, const Eigen::VectorXd& x,
                           const DcaOracleConfig& cfg) {
  DcaOracleConfig local = cfg;
  local.inner_solver = DcaOracleConfig::InnerSolver::kClosedFormQuadratic;
  return LtsDcaOracle(inst, local).propose(x);
}

}  // namespace repopt
