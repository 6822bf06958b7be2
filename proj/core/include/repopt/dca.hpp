#pragma once

#include <Eigen/Dense>

#include "repopt/lts.hpp"
#include "repopt/oracle.hpp"
#include "repopt/trimmed_lasso.hpp"

namespace repopt {

// Configuration for the difference-of-convex-algorithm oracle.  One step of
// the oracle linearizes the concave part at x and returns an (approximate)
// minimizer z of  f1(u) - <g, u>  with g a subgradient of f2 at x.
//
// mu_strong > 0 adds (mu/2)*||u||^2 to both convex parts.  The objective
// h = f1 - f2 is unchanged, but both parts become mu-strongly convex, which
// is the regime the descent and rate guarantees quantify.
struct DcaOracleConfig {
  enum class InnerSolver { kClosedFormQuadratic, kProximalGradientL1 };

  InnerSolver inner_solver = InnerSolver::kClosedFormQuadratic;
  double inner_tol = 1e-8;
  int inner_max_iter = 2000;
  double mu_strong = 0.0;

  // Throws std::invalid_argument on nonpositive tolerance or negative fields.
  void validate() const;
};

// DCA oracle for the trimmed lasso.  The subproblem
//   min_u 0.5*||Au - b||^2 + (mu/2)*||u||^2 - <g~, u> + lambda*||u||_1
// is solved by accelerated proximal gradient with an l1 prox, warm-started
// from the previous proposal.  The subproblem objective is checked post hoc:
// if the solve failed to improve on u = x, the oracle returns z = x.
//
// Holds a reference to the instance; the instance must outlive the oracle.
// Not safe for concurrent use (warm start is cached between calls).
class TrimmedLassoDcaOracle final : public Oracle {
 public:
  TrimmedLassoDcaOracle(const TrimmedLassoInstance& inst, DcaOracleConfig cfg);

  OracleProposal propose(const Eigen::VectorXd& x) const override;

 private:
  const TrimmedLassoInstance& inst_;
  DcaOracleConfig cfg_;
  Eigen::MatrixXd A_solve_;  // [A; sqrt(mu) I] when mu_strong > 0, else A
  Eigen::VectorXd b_solve_;
  double lipschitz_ = 0.0;   // safe upper bound on ||A_solve||_2^2
  mutable Eigen::VectorXd warm_;
};

// DCA oracle for least trimmed squares.  The subproblem is the quadratic
//   min_u 0.5*||Au - b||^2 + (mu/2)*||u||^2 - <g~, u>,
// solved through a cached factorization of A^T A + mu*I.  If the factored
// solve is unreliable (singular normal equations), the solve is repeated with
// a 1e-12 ridge and the proposal is flagged as an anomaly.
//
// Holds a reference to the instance; the instance must outlive the oracle.
class LtsDcaOracle final : public Oracle {
 public:
  LtsDcaOracle(const LtsInstance& inst, DcaOracleConfig cfg);

  OracleProposal propose(const Eigen::VectorXd& x) const override;

 private:
  const LtsInstance& inst_;
  DcaOracleConfig cfg_;
  Eigen::MatrixXd normal_matrix_;  // A^T A + mu*I
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  Eigen::VectorXd Atb_;
};

// One-shot conveniences for tests and small experiments.
OracleProposal dca_propose(const TrimmedLassoInstance& inst, const Eigen::VectorXd& x,
                           const DcaOracleConfig& cfg);
OracleProposal dca_propose(const LtsInstance& inst, const Eigen::VectorXd& x,
                           const DcaOracleConfig& cfg);

}  // namespace repopt
