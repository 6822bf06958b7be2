#include "repopt/exploration.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace repopt {

void ExplorationParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("ExplorationParams: gamma must be positive");
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("ExplorationParams: r must be finite and positive");
}

RepOutcome rep_step(const Eigen::VectorXd& x, double h_x, const Objective& objective,
                    const FeasibleSet& feasible, const DirectionSampler& dir_sampler,
                    const StepSampler& step_sampler, const ExplorationParams& params,
                    Rng& rng) {
  params.validate();

  RepOutcome out;
  out.v_ex = dir_sampler.sample(rng);
  out.t_hat = step_sampler.sample(rng);

  const Eigen::VectorXd candidate = x + out.t_hat * out.v_ex;
  if (feasible.contains(candidate)) {
    const double h_cand = objective.value(candidate);
    if (!std::isfinite(h_cand)) {
      out.numeric_anomaly = true;
    } else if (h_cand + 0.5 * params.gamma * out.t_hat * out.t_hat < h_x) {
      out.accepted = true;
      out.t_ex = out.t_hat;
      out.y = candidate;
      out.h_y = h_cand;
      return out;
    }
  }
  // Rejected: the point is unchanged, bit for bit.
  out.t_ex = 0.0;
  out.y = x;
  out.h_y = h_x;
  return out;
}

}  // namespace repopt
