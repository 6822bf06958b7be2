#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repopt/certify.hpp"
#include "repopt/stats.hpp"
#include "repopt/trajectory.hpp"

namespace repopt {

// Full description of one paired experiment: a family of random instances,
// a base oracle arm, and exploration-augmented arms over several seeds.
// Family-specific generator parameters are all present; only the ones for the
// configured family are read.
struct ExperimentConfig {
  std::string family;  // "trimmed_lasso" | "lts" | "relu"

  // Problem shape and generator parameters.
  int m = 50;
  int n = 100;
  int k = 5;                  // trimmed lasso sparsity target
  double lambda = 1.0;        // trimmed lasso penalty weight
  double noise_std = 0.1;     // trimmed lasso observation noise
  int q = 10;                 // trimmed row count (lts)
  double sigma_clean = 4.0;   // lts clean-row noise
  double outlier_std = 10.0;  // lts outlier noise
  double q_param = 0.2;       // relu fraction of negative targets
  double rho_b = 2.0;         // relu target scale

  int n_instances = 1;
  std::vector<std::uint64_t> aug_seeds = {0, 1, 2};
  int n_outer = 1000;

  // Exploration settings.
  std::string sampler = "sphere";  // "sphere" | "gauss_axis"
  double mu = 1.0;                 // gauss_axis axis concentration
  double gamma = 1.0;
  double r = 1.0;

  // Oracle settings.  inner_tol / inner_max_iter equal to 0 mean "use the
  // oracle's own default" (1e-8 / 2000 for DCA, 1e-10 / 200 for prox-linear).
  std::string oracle;  // "dca" | "prox_linear"; empty picks the family default
  double rho_prox = 0.1;
  double inner_tol = 0.0;
  int inner_max_iter = 0;

  std::uint64_t master_seed = 0;
  std::string output_dir = ".";
  bool save_trajectories = false;
  int threads = 1;

  // Throws std::invalid_argument on out-of-range fields or a family/oracle
  // mismatch.  Fills in an empty oracle with the family default.
  void validate_and_finalize();
};

// Parses "key = value" lines ('#' starts a comment; blank lines ignored;
// aug_seeds is a comma-separated list).  Unknown keys throw
// std::invalid_argument.  The result is validated.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Outcome of one instance's paired comparison.
struct PairedResult {
  int instance_id = 0;
  bool ok = true;       // false: the run failed; error holds the reason
  std::string error;
  double h_base = 0.0;
  std::vector<double> h_aug_per_seed;
  double h_aug_median = 0.0;
  double delta = 0.0;
  PairedLabel label = PairedLabel::kTie;
  int median_seed_index = 0;  // aug seed whose final iterate was certified
  DStatReport dstat_base;
  DStatReport dstat_aug;
};

struct SummaryTable {
  int attempted = 0;
  int completed = 0;
  int wins = 0;
  int ties = 0;
  int losses = 0;
  double mean_delta = 0.0;
  double median_win_delta = 0.0;  // NaN when there are no wins
  double mcnemar_p = 1.0;
  int non_dstat_base = 0;
  int non_dstat_aug = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<PairedResult> rows;  // ordered by instance_id
  SummaryTable summary;
};

// Runs the full sweep and writes summary.json, instances.csv and (optionally)
// trajectories/ under config.output_dir.  Instance work may be spread over
// config.threads threads; results are folded in instance order, so the
// outputs are identical regardless of thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Rendered outputs (also what run_experiment writes to disk).
std::string summary_json(const ExperimentResult& result);
std::string instances_csv(const std::vector<PairedResult>& rows, int n_aug_seeds);

// Parses instances.csv back into rows (numeric fields only; the dstat reports
// recover pass/gap).  Used to verify the emitted CSV is faithful.
std::vector<PairedResult> parse_instances_csv(const std::string& text);

// Checks the strong-convexity rate guarantee on a recorded run: for every
// prefix of length N,
//   min_{k<N} ||x^k - z^{k+1}|| <= sqrt(2 (h(x^0) - h_star) / (mu_total N))
// up to 1e-9 relative slack.  mu_total is the summed strong-convexity modulus
// of the two DC parts; h_star must lower-bound the objective.
bool verify_rate_bound(const Trajectory& trajectory, double mu_total, double h_star);

}  // namespace repopt
