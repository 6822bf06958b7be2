#pragma once

#include <Eigen/Core>

namespace repopt {

struct OracleProposal {
  Eigen::VectorXd z;
  bool anomaly = false;  // e.g. a regularized fallback solve was needed
};

/// A feasible base method: given the current iterate, propose the next one.
/// Implementations hold immutable configuration plus per-call scratch only,
/// so a single oracle may serve concurrent runs.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual OracleProposal propose(const Eigen::VectorXd& x) const = 0;
};

}  // namespace repopt
