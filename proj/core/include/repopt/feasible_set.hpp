#pragma once

#include <Eigen/Core>

namespace repopt {

/// Closed convex feasible set exposed through a membership predicate only.
/// contains() must be deterministic.
class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;

  virtual int dim() const = 0;
  virtual bool contains(const Eigen::VectorXd& x) const = 0;
};

/// C = R^n. Every point is feasible.
class FullSpace final : public FeasibleSet {
 public:
  explicit FullSpace(int n) : n_(n) {}

  int dim() const override { return n_; }
  bool contains(const Eigen::VectorXd&) const override { return true; }

 private:
  int n_;
};

/// Half-space {x : <normal, x> <= offset}. Mostly useful for exercising the
/// infeasible-candidate path.
class HalfSpace final : public FeasibleSet {
 public:
  HalfSpace(Eigen::VectorXd normal, double offset)
      : normal_(std::move(normal)), offset_(offset) {}

  int dim() const override { return static_cast<int>(normal_.size()); }
  bool contains(const Eigen::VectorXd& x) const override {
    return normal_.dot(x) <= offset_;
  }

 private:
  Eigen::VectorXd normal_;
  double offset_;
};

}  // namespace repopt
