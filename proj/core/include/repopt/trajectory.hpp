#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "repopt/rng.hpp"

namespace repopt {

/// Mutable state of one augmented run.
struct RunState {
  std::int64_t k = 0;
  Eigen::VectorXd x;
  double h_x = 0.0;
  double sum_sq_steps = 0.0;  // sum of (t_ex)^2, nondecreasing
  Rng rng;
};

/// Per-iteration record: values at the start of iteration k plus what the
/// exploration and oracle steps produced.
struct IterationRecord {
  std::int64_t k = 0;
  double h_x = 0.0;        // h(x^k)
  double h_z = 0.0;        // h(oracle proposal z^{k+1})
  bool rep_accepted = false;
  double t_ex = 0.0;
  double residual = 0.0;   // ||x^k - z^{k+1}||_2
};

struct Trajectory {
  std::vector<IterationRecord> records;
  Eigen::VectorXd final_x;
  double final_h = 0.0;
  std::int64_t rep_numeric_anomalies = 0;
  std::int64_t oracle_anomalies = 0;
};

/// Sum of squared accepted exploration steps over the whole run.
double step_budget(const Trajectory& trajectory);

/// (2/gamma) * (h(x^0) - h(x^N)); upper-bounds step_budget for every finite
/// completed run.
double step_budget_bound(const Trajectory& trajectory, double gamma);

/// CSV with header "k,h_x,h_z,rep_accepted,t_ex,residual", one row per
/// iteration, reals at 17 significant digits.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& os);
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace repopt
