#include "repopt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "repopt/dca.hpp"
#include "repopt/feasible_set.hpp"
#include "repopt/instance_io.hpp"
#include "repopt/loop.hpp"
#include "repopt/prox_linear.hpp"
#include "repopt/samplers.hpp"

namespace repopt {

namespace {

constexpr std::uint64_t kArmBaseTag = 0x62617365ULL;  // "base"
constexpr std::uint64_t kArmAugTag = 0x617567ULL;     // "aug"
constexpr std::uint64_t kTieSeedTag = 0x74696573ULL;  // "ties"

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": \"" + value + "\"");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key + ": \"" + value + "\"");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad seed value for " + key + ": \"" + value + "\"");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: bad boolean value for " + key + ": \"" + value + "\"");
}

AnyInstance generate_instance(const ExperimentConfig& cfg, std::uint64_t instance_seed) {
  Rng rng(instance_seed);
  if (cfg.family == "trimmed_lasso") {
    TrimmedLassoInstance inst =
        generate_trimmed_lasso(cfg.m, cfg.n, cfg.k, cfg.lambda, cfg.noise_std, rng);
    inst.seed = instance_seed;
    return inst;
  }
  if (cfg.family == "lts") {
    LtsInstance inst = generate_lts(cfg.m, cfg.n, cfg.q, cfg.sigma_clean, cfg.outlier_std, rng);
    inst.seed = instance_seed;
    return inst;
  }
  ReluInstance inst = generate_relu(cfg.m, cfg.n, cfg.q_param, cfg.rho_b, rng);
  inst.seed = instance_seed;
  return inst;
}

std::unique_ptr<Oracle> make_oracle(const ExperimentConfig& cfg, const AnyInstance& any) {
  if (cfg.oracle == "dca") {
    DcaOracleConfig oc;
    oc.inner_tol = cfg.inner_tol > 0.0 ? cfg.inner_tol : 1e-8;
    oc.inner_max_iter = cfg.inner_max_iter > 0 ? cfg.inner_max_iter : 2000;
    oc.mu_strong = 0.0;
    if (cfg.family == "trimmed_lasso") {
      oc.inner_solver = DcaOracleConfig::InnerSolver::kProximalGradientL1;
      return std::make_unique<TrimmedLassoDcaOracle>(std::get<TrimmedLassoInstance>(any), oc);
    }
    oc.inner_solver = DcaOracleConfig::InnerSolver::kClosedFormQuadratic;
    return std::make_unique<LtsDcaOracle>(std::get<LtsInstance>(any), oc);
  }
  ProxLinearConfig pc;
  pc.rho_prox = cfg.rho_prox;
  pc.inner_max_iter = cfg.inner_max_iter > 0 ? cfg.inner_max_iter : 200;
  pc.inner_tol = cfg.inner_tol > 0.0 ? cfg.inner_tol : 1e-10;
  return std::make_unique<ReluProxLinearOracle>(std::get<ReluInstance>(any), pc);
}

DStatReport certify_point(const ExperimentConfig& cfg, const AnyInstance& any,
                          const Eigen::VectorXd& x, std::uint64_t tie_seed) {
  CertifierTolerances tol;
  tol.lts_tie_seed = tie_seed;
  if (cfg.family == "trimmed_lasso")
    return certify_trimmed_lasso(std::get<TrimmedLassoInstance>(any), x, tol);
  if (cfg.family == "lts") return certify_lts(std::get<LtsInstance>(any), x, tol);
  return certify_relu(std::get<ReluInstance>(any), x, tol);
}

using TrajectoryFiles = std::vector<std::pair<std::string, std::string>>;

PairedResult run_instance(const ExperimentConfig& cfg, int index, TrajectoryFiles* trajectories) {
  PairedResult row;
  row.instance_id = index;
  const int n_seeds = static_cast<int>(cfg.aug_seeds.size());
  try {
    const std::uint64_t instance_seed =
        hash64({cfg.master_seed, static_cast<std::uint64_t>(index)});
    const AnyInstance any = generate_instance(cfg, instance_seed);
    const Objective& objective = instance_objective(any);
    const int n = objective.dim();
    const FullSpace feasible(n);
    const DirectionSampler dir_sampler = cfg.sampler == "gauss_axis"
                                             ? DirectionSampler::GaussAxis(n, cfg.mu)
                                             : DirectionSampler::Sphere(n);
    const StepSampler step_sampler{cfg.r};

    ExplorationParams params;
    params.gamma = cfg.gamma;
    params.r = cfg.r;

    char name[64];

    // Base arm: the oracle alone, no exploration.  A fresh oracle object per
    // arm keeps warm-start caches from leaking between arms.
    params.exploration_enabled = false;
    Trajectory base;
    {
      const auto oracle = make_oracle(cfg, any);
      base = run(objective, feasible, *oracle, dir_sampler, step_sampler, params, cfg.n_outer,
                 hash64({instance_seed, kArmBaseTag, 0}));
    }
    row.h_base = base.final_h;
    if (trajectories) {
      std::snprintf(name, sizeof(name), "instance_%04d_base.csv", index);
      trajectories->emplace_back(name, trajectory_csv(base));
    }

    // Augmented arms, one per exploration seed.
    params.exploration_enabled = true;
    std::vector<Trajectory> augmented;
    augmented.reserve(n_seeds);
    for (int j = 0; j < n_seeds; ++j) {
      const auto oracle = make_oracle(cfg, any);
      Trajectory traj =
          run(objective, feasible, *oracle, dir_sampler, step_sampler, params, cfg.n_outer,
              hash64({instance_seed, kArmAugTag, cfg.aug_seeds[j]}));
      row.h_aug_per_seed.push_back(traj.final_h);
      if (trajectories) {
        std::snprintf(name, sizeof(name), "instance_%04d_aug_s%d.csv", index, j);
        trajectories->emplace_back(name, trajectory_csv(traj));
      }
      augmented.push_back(std::move(traj));
    }

    row.h_aug_median = median(row.h_aug_per_seed);
    const DeltaClassification cls = classify_delta(row.h_base, row.h_aug_median);
    row.delta = cls.delta;
    row.label = cls.label;
    row.median_seed_index = lower_median_index(row.h_aug_per_seed);

    const std::uint64_t tie_seed = hash64({instance_seed, kTieSeedTag});
    row.dstat_base = certify_point(cfg, any, base.final_x, tie_seed);
    row.dstat_aug = certify_point(cfg, any, augmented[row.median_seed_index].final_x, tie_seed);
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
    row.h_base = kNan;
    row.h_aug_per_seed.assign(n_seeds, kNan);
    row.h_aug_median = kNan;
    row.delta = kNan;
    row.dstat_base = DStatReport{};
    row.dstat_aug = DStatReport{};
    row.dstat_base.gap = kNan;
    row.dstat_aug.gap = kNan;
  }
  return row;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json out;
  out["family"] = cfg.family;
  out["m"] = cfg.m;
  out["n"] = cfg.n;
  out["k"] = cfg.k;
  out["lambda"] = cfg.lambda;
  out["noise_std"] = cfg.noise_std;
  out["q"] = cfg.q;
  out["sigma_clean"] = cfg.sigma_clean;
  out["outlier_std"] = cfg.outlier_std;
  out["q_param"] = cfg.q_param;
  out["rho_b"] = cfg.rho_b;
  out["n_instances"] = cfg.n_instances;
  out["aug_seeds"] = cfg.aug_seeds;
  out["n_outer"] = cfg.n_outer;
  out["sampler"] = cfg.sampler;
  out["mu"] = cfg.mu;
  out["gamma"] = cfg.gamma;
  out["r"] = cfg.r;
  out["oracle"] = cfg.oracle;
  out["rho_prox"] = cfg.rho_prox;
  out["inner_tol"] = cfg.inner_tol;
  out["inner_max_iter"] = cfg.inner_max_iter;
  out["master_seed"] = cfg.master_seed;
  out["output_dir"] = cfg.output_dir;
  out["save_trajectories"] = cfg.save_trajectories;
  out["threads"] = cfg.threads;
  return out;
}

}  // namespace

void ExperimentConfig::validate_and_finalize() {
  if (family != "trimmed_lasso" && family != "lts" && family != "relu")
    throw std::invalid_argument("config: unknown family \"" + family + "\"");
  if (oracle.empty()) oracle = family == "relu" ? "prox_linear" : "dca";
  if (oracle != "dca" && oracle != "prox_linear")
    throw std::invalid_argument("config: unknown oracle \"" + oracle + "\"");
  if (family == "relu" && oracle != "prox_linear")
    throw std::invalid_argument("config: the relu family requires the prox_linear oracle");
  if (family != "relu" && oracle != "dca")
    throw std::invalid_argument("config: family " + family + " requires the dca oracle");

  if (m < 1 || n < 1) throw std::invalid_argument("config: m and n must be positive");
  if (n_instances < 1) throw std::invalid_argument("config: n_instances must be positive");
  if (aug_seeds.empty()) throw std::invalid_argument("config: aug_seeds must be nonempty");
  if (n_outer < 1) throw std::invalid_argument("config: n_outer must be positive");
  if (sampler != "sphere" && sampler != "gauss_axis")
    throw std::invalid_argument("config: unknown sampler \"" + sampler + "\"");
  if (sampler == "gauss_axis" && !(mu >= 1.0))
    throw std::invalid_argument("config: gauss_axis requires mu >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("config: gamma must be a positive finite real");
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("config: r must be a positive finite real");
  if (!(rho_prox > 0.0)) throw std::invalid_argument("config: rho_prox must be positive");
  if (inner_tol < 0.0) throw std::invalid_argument("config: inner_tol must be nonnegative");
  if (inner_max_iter < 0) throw std::invalid_argument("config: inner_max_iter must be nonnegative");
  if (threads < 1) throw std::invalid_argument("config: threads must be positive");
  if (output_dir.empty()) throw std::invalid_argument("config: output_dir must be set");

  if (family == "trimmed_lasso") {
    if (k < 1 || k > n) throw std::invalid_argument("config: k must lie in [1, n]");
    if (!(lambda > 0.0)) throw std::invalid_argument("config: lambda must be positive");
    if (noise_std < 0.0) throw std::invalid_argument("config: noise_std must be nonnegative");
  } else if (family == "lts") {
    if (q < 1 || q > m) throw std::invalid_argument("config: q must lie in [1, m]");
    if (sigma_clean < 0.0) throw std::invalid_argument("config: sigma_clean must be nonnegative");
    if (outlier_std < 0.0) throw std::invalid_argument("config: outlier_std must be nonnegative");
  } else {
    if (q_param < 0.0 || q_param > 1.0)
      throw std::invalid_argument("config: q_param must lie in [0, 1]");
    if (!(rho_b > 0.0)) throw std::invalid_argument("config: rho_b must be positive");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not of the form key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "family") cfg.family = value;
    else if (key == "m") cfg.m = static_cast<int>(parse_int(key, value));
    else if (key == "n") cfg.n = static_cast<int>(parse_int(key, value));
    else if (key == "k") cfg.k = static_cast<int>(parse_int(key, value));
    else if (key == "lambda") cfg.lambda = parse_double(key, value);
    else if (key == "noise_std") cfg.noise_std = parse_double(key, value);
    else if (key == "q") cfg.q = static_cast<int>(parse_int(key, value));
    else if (key == "sigma_clean") cfg.sigma_clean = parse_double(key, value);
    else if (key == "outlier_std") cfg.outlier_std = parse_double(key, value);
    else if (key == "q_param") cfg.q_param = parse_double(key, value);
    else if (key == "rho_b") cfg.rho_b = parse_double(key, value);
    else if (key == "n_instances") cfg.n_instances = static_cast<int>(parse_int(key, value));
    else if (key == "aug_seeds") {
      cfg.aug_seeds.clear();
      std::istringstream list(value);
      std::string item;
      while (std::getline(list, item, ','))
        cfg.aug_seeds.push_back(parse_u64(key, trim(item)));
    }
    else if (key == "n_outer") cfg.n_outer = static_cast<int>(parse_int(key, value));
    else if (key == "sampler") cfg.sampler = value;
    else if (key == "mu") cfg.mu = parse_double(key, value);
    else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "r") cfg.r = parse_double(key, value);
    else if (key == "oracle") cfg.oracle = value;
    else if (key == "rho_prox") cfg.rho_prox = parse_double(key, value);
    else if (key == "inner_tol") cfg.inner_tol = parse_double(key, value);
    else if (key == "inner_max_iter") cfg.inner_max_iter = static_cast<int>(parse_int(key, value));
    else if (key == "master_seed") cfg.master_seed = parse_u64(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "save_trajectories") cfg.save_trajectories = parse_bool(key, value);
    else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
    else throw std::invalid_argument("config: unknown key \"" + key + "\"");
  }
  cfg.validate_and_finalize();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  result.config = config;
  result.config.validate_and_finalize();
  const ExperimentConfig& cfg = result.config;

  result.rows.resize(cfg.n_instances);
  std::vector<TrajectoryFiles> trajectory_files(cfg.save_trajectories ? cfg.n_instances : 0);

  const auto worker = [&](int first) {
    for (int i = first; i < cfg.n_instances; i += cfg.threads)
      result.rows[i] =
          run_instance(cfg, i, cfg.save_trajectories ? &trajectory_files[i] : nullptr);
  };
  if (cfg.threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(cfg.threads);
    for (int t = 0; t < cfg.threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  // Aggregate in instance order; thread count cannot change the outcome.
  SummaryTable& s = result.summary;
  s.attempted = cfg.n_instances;
  std::vector<double> win_deltas;
  double delta_sum = 0.0;
  for (const PairedResult& row : result.rows) {
    if (!row.ok) continue;
    ++s.completed;
    delta_sum += row.delta;
    switch (row.label) {
      case PairedLabel::kWin:
        ++s.wins;
        win_deltas.push_back(row.delta);
        break;
      case PairedLabel::kTie:
        ++s.ties;
        break;
      case PairedLabel::kLoss:
        ++s.losses;
        break;
    }
    if (!row.dstat_base.pass) ++s.non_dstat_base;
    if (!row.dstat_aug.pass) ++s.non_dstat_aug;
  }
  s.mean_delta = s.completed > 0 ? delta_sum / s.completed : kNan;
  s.median_win_delta = win_deltas.empty() ? kNan : median(win_deltas);
  s.mcnemar_p = mcnemar_exact_one_sided(s.wins, s.losses);

  // Emit outputs.
  namespace fs = std::filesystem;
  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "summary.json");
    if (!out) throw std::runtime_error("cannot write " + (out_dir / "summary.json").string());
    out << summary_json(result) << '\n';
  }
  {
    std::ofstream out(out_dir / "instances.csv");
    if (!out) throw std::runtime_error("cannot write " + (out_dir / "instances.csv").string());
    out << instances_csv(result.rows, static_cast<int>(cfg.aug_seeds.size()));
  }
  if (cfg.save_trajectories) {
    const fs::path traj_dir = out_dir / "trajectories";
    fs::create_directories(traj_dir);
    for (const auto& per_instance : trajectory_files)
      for (const auto& [name, csv] : per_instance) {
        std::ofstream out(traj_dir / name);
        if (!out) throw std::runtime_error("cannot write " + (traj_dir / name).string());
        out << csv;
      }
  }
  return result;
}

std::string summary_json(const ExperimentResult& result) {
  const SummaryTable& s = result.summary;
  nlohmann::json out;
  out["family"] = result.config.family;
  out["attempted"] = s.attempted;
  out["completed"] = s.completed;
  out["counts"] = {{"win", s.wins}, {"tie", s.ties}, {"loss", s.losses}};
  out["mean_delta"] = s.mean_delta;
  out["median_win_delta"] = s.median_win_delta;  // null when non-finite
  out["mcnemar_p"] = s.mcnemar_p;
  out["non_dstat_base"] = s.non_dstat_base;
  out["non_dstat_aug"] = s.non_dstat_aug;
  out["aug_certified_seed_rule"] = "lower_median";
  out["config"] = config_json(result.config);
  return out.dump(2);
}

std::string instances_csv(const std::vector<PairedResult>& rows, int n_aug_seeds) {
  std::ostringstream out;
  out << "instance_id,h_base";
  for (int j = 0; j < n_aug_seeds; ++j) out << ",h_aug_s" << j;
  out << ",delta,label,dstat_base_pass,dstat_base_gap,dstat_aug_pass,dstat_aug_gap\n";
  for (const PairedResult& row : rows) {
    out << row.instance_id << ',' << fmt17(row.h_base);
    for (int j = 0; j < n_aug_seeds; ++j) {
      const double v = j < static_cast<int>(row.h_aug_per_seed.size())
                           ? row.h_aug_per_seed[j]
                           : kNan;
      out << ',' << fmt17(v);
    }
    out << ',' << fmt17(row.delta) << ',' << (row.ok ? paired_label_name(row.label) : "error")
        << ',' << (row.dstat_base.pass ? 1 : 0) << ',' << fmt17(row.dstat_base.gap) << ','
        << (row.dstat_aug.pass ? 1 : 0) << ',' << fmt17(row.dstat_aug.gap) << '\n';
  }
  return out.str();
}

std::vector<PairedResult> parse_instances_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("instances csv: empty input");

  std::vector<std::string> header;
  {
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) header.push_back(cell);
  }
  int n_aug_seeds = 0;
  for (const std::string& name : header)
    if (name.rfind("h_aug_s", 0) == 0) ++n_aug_seeds;
  const std::size_t expected_cells = 7 + n_aug_seeds;
  if (header.size() != expected_cells) throw std::runtime_error("instances csv: bad header");

  const auto to_double = [](const std::string& cell) {
    return std::strtod(cell.c_str(), nullptr);
  };

  std::vector<PairedResult> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::istringstream cell_in(line);
    std::string cell;
    while (std::getline(cell_in, cell, ',')) cells.push_back(cell);
    if (cells.size() != expected_cells) throw std::runtime_error("instances csv: bad row");

    PairedResult row;
    std::size_t c = 0;
    row.instance_id = static_cast<int>(std::stoll(cells[c++]));
    row.h_base = to_double(cells[c++]);
    for (int j = 0; j < n_aug_seeds; ++j) row.h_aug_per_seed.push_back(to_double(cells[c++]));
    row.delta = to_double(cells[c++]);
    const std::string& label = cells[c++];
    if (label == "error") {
      row.ok = false;
    } else {
      row.label = paired_label_from_name(label);
    }
    row.dstat_base.pass = cells[c] == "1";
    ++c;
    row.dstat_base.gap = to_double(cells[c++]);
    row.dstat_aug.pass = cells[c] == "1";
    ++c;
    row.dstat_aug.gap = to_double(cells[c++]);
    if (row.ok && !row.h_aug_per_seed.empty()) row.h_aug_median = median(row.h_aug_per_seed);
    rows.push_back(std::move(row));
  }
  return rows;
}

bool verify_rate_bound(const Trajectory& trajectory, double mu_total, double h_star) {
  if (!(mu_total > 0.0)) throw std::invalid_argument("verify_rate_bound: mu_total must be positive");
  if (trajectory.records.empty()) return true;
  const double h0 = trajectory.records.front().h_x;
  const double numerator = std::max(0.0, 2.0 * (h0 - h_star));

  double min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trajectory.records.size(); ++i) {
    min_residual = std::min(min_residual, trajectory.records[i].residual);
    const double bound = std::sqrt(numerator / (mu_total * static_cast<double>(i + 1)));
    if (min_residual > bound * (1.0 + 1e-9)) return false;
  }
  return true;
}

}  // namespace repopt
