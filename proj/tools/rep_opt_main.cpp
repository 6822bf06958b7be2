// rep-opt: experiment runner, d-stationarity certifier and McNemar helper.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 run failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "repopt/certify.hpp"
#include "repopt/experiment.hpp"
#include "repopt/instance_io.hpp"
#include "repopt/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::VectorXd read_point_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open point file: " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw std::invalid_argument("point file has non-numeric content: " + path);
  if (values.empty()) throw std::invalid_argument("point file is empty: " + path);
  Eigen::VectorXd x(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) x[i] = values[i];
  return x;
}

int cmd_run(const std::string& config_path, bool save_trajectories) {
  repopt::ExperimentConfig cfg = repopt::load_config_file(config_path);
  if (save_trajectories) cfg.save_trajectories = true;
  const repopt::ExperimentResult result = repopt::run_experiment(cfg);
  const repopt::SummaryTable& s = result.summary;
  std::cout << "family=" << result.config.family << " completed=" << s.completed << "/"
            << s.attempted << " win/tie/loss=" << s.wins << "/" << s.ties << "/" << s.losses
            << " mcnemar_p=" << fmt17(s.mcnemar_p) << " non_dstat=" << s.non_dstat_base << "/"
            << s.non_dstat_aug << "\n"
            << "outputs written to " << result.config.output_dir << "\n";
  return kExitOk;
}

int cmd_certify(const std::string& family, const std::string& instance_path,
                const std::string& point_path) {
  const repopt::AnyInstance instance = repopt::read_instance_file(instance_path);
  const std::string actual = repopt::instance_type_name(instance);
  if (family != actual)
    throw std::invalid_argument("instance file holds family \"" + actual +
                                "\" but --family says \"" + family + "\"");
  const Eigen::VectorXd x = read_point_file(point_path);
  if (x.size() != repopt::instance_dim(instance))
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " does not match instance dimension " +
                                std::to_string(repopt::instance_dim(instance)));

  const repopt::CertifierTolerances tol;
  repopt::DStatReport report;
  if (family == "trimmed_lasso")
    report = certify_trimmed_lasso(std::get<repopt::TrimmedLassoInstance>(instance), x, tol);
  else if (family == "lts")
    report = certify_lts(std::get<repopt::LtsInstance>(instance), x, tol);
  else
    report = certify_relu(std::get<repopt::ReluInstance>(instance), x, tol);

  std::cout << repopt::dstat_report_json(report) << "\n";
  return kExitOk;
}

int cmd_mcnemar(int wins, int losses) {
  std::cout << fmt17(repopt::mcnemar_exact_one_sided(wins, losses)) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-exploration augmentation experiments for nonsmooth descent oracles"};
  app.require_subcommand(1);

  std::string config_path;
  bool save_trajectories = false;
  CLI::App* run = app.add_subcommand("run", "Run a paired base-vs-augmented experiment sweep");
  run->add_option("--config", config_path, "Key-value experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_flag("--save-trajectories", save_trajectories,
                "Also write per-run trajectory CSVs under <output_dir>/trajectories/");

  std::string family, instance_path, point_path;
  CLI::App* certify =
      app.add_subcommand("certify", "Certify d-stationarity of a point on a serialized instance");
  certify->add_option("--family", family, "Problem family")
      ->required()
      ->check(CLI::IsMember({"trimmed_lasso", "lts", "relu"}));
  certify->add_option("--instance", instance_path, "Instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  certify->add_option("--point", point_path, "Whitespace-separated coordinates of the point")
      ->required()
      ->check(CLI::ExistingFile);

  int wins = 0, losses = 0;
  CLI::App* mcnemar =
      app.add_subcommand("mcnemar", "Exact one-sided McNemar p-value for win/loss counts");
  mcnemar->add_option("--wins", wins, "Number of wins")->required()->check(CLI::NonNegativeNumber);
  mcnemar->add_option("--losses", losses, "Number of losses")
      ->required()
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, save_trajectories);
    if (certify->parsed()) return cmd_certify(family, instance_path, point_path);
    return cmd_mcnemar(wins, losses);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "run failure: " << e.what() << "\n";
    return kExitRun;
  }
}
