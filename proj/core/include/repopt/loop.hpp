#pragma once

#include <cstdint>

#include "repopt/exploration.hpp"
#include "repopt/oracle.hpp"
#include "repopt/trajectory.hpp"

namespace repopt {

/// One iteration of the exploration-augmented loop: take one exploration step
/// y and one oracle proposal z from the current point, keep whichever has the
/// smaller objective value (ties go to the oracle point), and append a record
/// to the trajectory if one is given. Throws if the oracle proposal is
/// infeasible.
RunState augmented_iteration(RunState state, const Oracle& oracle, const Objective& objective,
                             const FeasibleSet& feasible, const DirectionSampler& dir_sampler,
                             const StepSampler& step_sampler, const ExplorationParams& params,
                             Trajectory* trajectory);

/// Run exactly N augmented iterations from x0. Deterministic given
/// (objective, oracle, samplers, params, N, seed, x0). Requires N >= 1 and a
/// feasible initial point.
Trajectory run(const Objective& objective, const FeasibleSet& feasible, const Oracle& oracle,
               const DirectionSampler& dir_sampler, const StepSampler& step_sampler,
               const ExplorationParams& params, std::int64_t n_iterations, std::uint64_t seed,
               const Eigen::VectorXd& x0);

/// Same, starting from the origin.
Trajectory run(const Objective& objective, const FeasibleSet& feasible, const Oracle& oracle,
               const DirectionSampler& dir_sampler, const StepSampler& step_sampler,
               const ExplorationParams& params, std::int64_t n_iterations, std::uint64_t seed);

}  // namespace repopt
