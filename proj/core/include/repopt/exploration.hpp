#pragma once

#include <Eigen/Core>

#include "repopt/feasible_set.hpp"
#include "repopt/objective.hpp"
#include "repopt/rng.hpp"
#include "repopt/samplers.hpp"

namespace repopt {

/// Parameters of the exploration step: quadratic acceptance penalty gamma > 0
/// and step-size cap r in (0, inf). exploration_enabled = false turns the
/// augmented loop into pure oracle iteration.
struct ExplorationParams {
  double gamma = 1.0;
  double r = 1.0;
  bool exploration_enabled = true;

  void validate() const;
};

/// Outcome of one exploration step.
struct RepOutcome {
  Eigen::VectorXd v_ex;       // sampled unit direction
  double t_hat = 0.0;         // sampled candidate step in [0, r]
  double t_ex = 0.0;          // accepted step: t_hat or 0
  Eigen::VectorXd y;          // x + t_ex * v_ex (exactly x when rejected)
  double h_y = 0.0;           // objective at y
  bool accepted = false;
  bool numeric_anomaly = false;  // non-finite objective at a feasible candidate
};

/// One exploration step from x: sample a direction and a step size (exactly
/// one of each, no resampling), and accept the candidate x + t_hat * v iff it
/// is feasible and
///     h(candidate) + (gamma/2) * t_hat^2 < h(x)
/// strictly. Rejected or infeasible candidates leave the point unchanged; the
/// objective is not evaluated at infeasible candidates. A non-finite objective
/// value at a feasible candidate rejects the move and sets numeric_anomaly.
RepOutcome rep_step(const Eigen::VectorXd& x, double h_x, const Objective& objective,
                    const FeasibleSet& feasible, const DirectionSampler& dir_sampler,
                    const StepSampler& step_sampler, const ExplorationParams& params,
                    Rng& rng);

}  // namespace repopt
