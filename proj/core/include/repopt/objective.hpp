#pragma once

#include <Eigen/Core>

namespace repopt {

/// Minimal evaluation interface for an objective h : R^n -> R. Implementations
/// must be deterministic: the same x always yields the same value.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
};

}  // namespace repopt
