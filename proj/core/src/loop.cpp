#include "repopt/loop.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace repopt {

RunState augmented_iteration(RunState state, const Oracle& oracle, const Objective& objective,
                             const FeasibleSet& feasible, const DirectionSampler& dir_sampler,
                             const StepSampler& step_sampler, const ExplorationParams& params,
                             Trajectory* trajectory) {
  // Exploration arm. Disabled exploration degenerates to y = x^k without
  // consuming generator state.
  RepOutcome rep;
  if (params.exploration_enabled) {
    rep = rep_step(state.x, state.h_x, objective, feasible, dir_sampler, step_sampler, params,
                   state.rng);
  } else {
    rep.t_ex = 0.0;
    rep.y = state.x;
    rep.h_y = state.h_x;
  }

  // Oracle arm.
  OracleProposal proposal = oracle.propose(state.x);
  if (!feasible.contains(proposal.z))
    throw std::runtime_error("augmented_iteration: oracle proposed an infeasible point");
  const double h_z = objective.value(proposal.z);
  const double residual = (state.x - proposal.z).norm();

  if (trajectory) {
    trajectory->records.push_back(
        {state.k, state.h_x, h_z, rep.accepted, rep.t_ex, residual});
    if (rep.numeric_anomaly) ++trajectory->rep_numeric_anomalies;
    if (proposal.anomaly) ++trajectory->oracle_anomalies;
  }

  // Greedy selection with ties broken toward the oracle point, so the base
  // dynamics are unchanged whenever exploration adds nothing.  When the
  // exploration arm stayed at x the comparison is h(z) vs the cached h(x);
  // near a fixed point the true oracle decrease sinks below the rounding
  // noise of the two evaluations, and a one-ulp misfire would then pin the
  // (deterministic) iteration at x forever.  A slack far above eval noise but
  // far below any meaningful decrease keeps the dynamics moving; when the
  // exploration point actually moved, the strict argmin applies unchanged.
  state.sum_sq_steps += rep.t_ex * rep.t_ex;
  const double accept_slack =
      rep.accepted ? 0.0 : 1e-11 * std::max(1.0, std::abs(rep.h_y));
  if (h_z <= rep.h_y + accept_slack) {
    state.x = std::move(proposal.z);
    state.h_x = h_z;
  } else {
    state.x = std::move(rep.y);
    state.h_x = rep.h_y;
  }
  ++state.k;
  return state;
}

Trajectory run(const Objective& objective, const FeasibleSet& feasible, const Oracle& oracle,
               const DirectionSampler& dir_sampler, const StepSampler& step_sampler,
               const ExplorationParams& params, std::int64_t n_iterations, std::uint64_t seed,
               const Eigen::VectorXd& x0) {
  params.validate();
  if (n_iterations < 1) throw std::invalid_argument("run: iteration count must be >= 1");
  if (!feasible.contains(x0)) throw std::invalid_argument("run: initial point is infeasible");

  RunState state{0, x0, objective.value(x0), 0.0, Rng(seed)};
  if (!std::isfinite(state.h_x))
    throw std::invalid_argument("run: objective is not finite at the initial point");

  Trajectory trajectory;
  trajectory.records.reserve(static_cast<std::size_t>(n_iterations));
  for (std::int64_t k = 0; k < n_iterations; ++k) {
    state = augmented_iteration(std::move(state), oracle, objective, feasible, dir_sampler,
                                step_sampler, params, &trajectory);
  }
  trajectory.final_x = std::move(state.x);
  trajectory.final_h = state.h_x;
  return trajectory;
}

Trajectory run(const Objective& objective, const FeasibleSet& feasible, const Oracle& oracle,
               const DirectionSampler& dir_sampler, const StepSampler& step_sampler,
               const ExplorationParams& params, std::int64_t n_iterations, std::uint64_t seed) {
  return run(objective, feasible, oracle, dir_sampler, step_sampler, params, n_iterations, seed,
             Eigen::VectorXd::Zero(objective.dim()));
}

}  // namespace repopt
