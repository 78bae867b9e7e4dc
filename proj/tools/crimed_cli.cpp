// Command-line front end: experiment presets and custom configs, the
// divergence calculator, the median-concentration validator, and the
// lower-bound report.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crimed/experiment_config.hpp"
#include "crimed/reports.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

using crimed::format_double;

int cmd_run_experiment(const crimed::ExperimentConfig& config, int threads) {
  const crimed::BanditInstance instance = config.resolve_instance();
  const std::vector<crimed::PolicyDescriptor> policies =
      config.resolve_policies();
  const std::vector<long> checkpoints =
      crimed::log_spaced_checkpoints(config.horizon, config.checkpoint_count);

  std::vector<std::pair<std::string, crimed::MonteCarloSummary>> results;
  for (const crimed::PolicyDescriptor& descriptor : policies) {
    crimed::MonteCarloSummary summary =
        crimed::monte_carlo(instance, descriptor, config.horizon, config.reps,
                            config.master_seed, checkpoints, threads);
    const std::string path =
        config.output_dir + "/regret_" + descriptor.name + ".csv";
    crimed::write_file(path, crimed::regret_csv(summary));
    std::cout << "wrote " << path << " (" << format_double(summary.wall_seconds)
              << "s)\n";
    results.emplace_back(descriptor.name, std::move(summary));
  }

  const crimed::LowerBoundReport report =
      crimed::lower_bound_report(instance, instance.common_eps());
  const std::string summary_path = config.output_dir + "/summary.csv";
  crimed::write_file(summary_path, crimed::summary_csv(results, report));
  std::cout << "wrote " << summary_path << "\n";
  return kExitOk;
}

int cmd_compute_kl(double x, double y, double eps_value) {
  const crimed::Eps eps(eps_value);
  const double dmin = crimed::delta_min(eps);
  const double delta = y - x;

  double c = 1.0;
  double delta_plus = dmin;
  double delta_minus = dmin;
  if (!eps.is_zero() && delta > dmin) {
    const crimed::HuberPairSolution solution = crimed::solve_c(delta, eps);
    c = solution.c;
    delta_plus = solution.delta_plus;
    delta_minus = solution.delta_minus;
  } else if (eps.is_zero()) {
    delta_plus = delta_minus = std::max(delta, 0.0);
  }

  std::cout << "kl=" << format_double(crimed::kl_eps_gauss(x, y, eps)) << "\n"
            << "c=" << format_double(c) << "\n"
            << "delta_plus=" << format_double(delta_plus) << "\n"
            << "delta_minus=" << format_double(delta_minus) << "\n"
            << "delta_min=" << format_double(dmin) << "\n"
            << "derivative="
            << format_double(crimed::kl_eps_gauss_derivative(
                   std::max(delta, 0.0), eps))
            << "\n";
  return kExitOk;
}

int cmd_check_concentration(const std::vector<long>& ns,
                            const std::vector<double>& ys,
                            const std::vector<double>& epsilons, int reps,
                            std::uint64_t seed, const std::string& out_path) {
  const std::vector<crimed::ConcentrationRow> rows =
      crimed::run_concentration_grid(ns, ys, epsilons, reps, seed);
  const std::string csv = crimed::concentration_csv(rows);
  if (out_path.empty())
    std::cout << csv;
  else
    crimed::write_file(out_path, csv);

  for (const crimed::ConcentrationRow& row : rows) {
    if (!row.pass) {
      std::cerr << "violation: n=" << row.n << " y=" << format_double(row.y)
                << " eps=" << format_double(row.eps) << " adversary="
                << row.adversary
                << " empirical=" << format_double(row.empirical_freq)
                << " bound=" << format_double(row.bound)
                << " se=" << format_double(row.std_error) << "\n";
      return kExitRuntime;
    }
  }
  return kExitOk;
}

int cmd_lower_bound(const crimed::BanditInstance& instance) {
  const crimed::LowerBoundReport report =
      crimed::lower_bound_report(instance, instance.common_eps());
  for (const auto& slope : report.slopes) {
    std::cout << "arm=" << slope.arm << " gap=" << format_double(slope.gap)
              << " slope=" << format_double(slope.slope)
              << (slope.optimal ? " (optimal)" : "") << "\n";
  }
  std::cout << "regret_coefficient="
            << format_double(report.regret_coefficient) << "\n";
  return kExitOk;
}

crimed::ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot read config file " + path);
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(file);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") +
                                e.what());
  }
  return crimed::parse_experiment_config(document);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit simulation under unbounded stochastic corruption"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (0 = hardware, capped by CRIMED_THREADS)");

  // run-experiment
  auto* run_cmd =
      app.add_subcommand("run-experiment", "simulate policies, emit CSVs");
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  std::string policy_list;
  long horizon = 10000;
  int reps = 100;
  std::uint64_t seed = 1;
  int checkpoint_count = 100;
  bool have_horizon = false, have_reps = false, have_seed = false,
       have_out = false, have_checkpoints = false;
  run_cmd->add_option("--config", config_path, "JSON config file");
  run_cmd->add_option("--preset", preset, "setting1 .. setting5");
  run_cmd->add_option("--policies", policy_list,
                      "comma-separated policy names");
  run_cmd->add_option("--horizon", horizon, "steps per run")
      ->each([&](const std::string&) { have_horizon = true; });
  run_cmd->add_option("--reps", reps, "Monte-Carlo repetitions")
      ->each([&](const std::string&) { have_reps = true; });
  run_cmd->add_option("--seed", seed, "master seed")
      ->each([&](const std::string&) { have_seed = true; });
  run_cmd->add_option("--out", out_dir, "output directory")
      ->each([&](const std::string&) { have_out = true; });
  run_cmd->add_option("--checkpoints", checkpoint_count,
                      "number of log-spaced checkpoints")
      ->each([&](const std::string&) { have_checkpoints = true; });

  // compute-kl
  auto* kl_cmd = app.add_subcommand(
      "compute-kl", "corrupted divergence, c, and gap geometry");
  double kl_x = 0.0, kl_y = 0.0, kl_eps = 0.0;
  kl_cmd->add_option("x", kl_x, "left mean")->required();
  kl_cmd->add_option("y", kl_y, "right mean")->required();
  kl_cmd->add_option("eps", kl_eps, "corruption level in [0, 0.5)")
      ->required();

  // check-concentration
  auto* conc_cmd = app.add_subcommand(
      "check-concentration",
      "Monte-Carlo median-concentration domination table");
  std::vector<long> grid_n{50, 200, 1000};
  std::vector<double> grid_y{0.1, 0.3, 0.5};
  std::vector<double> grid_eps{0.1, 0.2, 0.3, 0.45};
  int conc_reps = 2000;
  std::uint64_t conc_seed = 1;
  std::string conc_out;
  conc_cmd->add_option("--n", grid_n, "sample sizes");
  conc_cmd->add_option("--y", grid_y, "deviations, each in [0,1]");
  conc_cmd->add_option("--eps", grid_eps, "corruption levels");
  conc_cmd->add_option("--reps", conc_reps, "medians per cell");
  conc_cmd->add_option("--seed", conc_seed, "seed");
  conc_cmd->add_option("--out", conc_out, "CSV path (default stdout)");

  // lower-bound
  auto* lb_cmd =
      app.add_subcommand("lower-bound", "per-arm asymptotic regret slopes");
  std::string lb_preset;
  std::string lb_config;
  lb_cmd->add_option("--preset", lb_preset, "setting1 .. setting5");
  lb_cmd->add_option("--config", lb_config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      crimed::ExperimentConfig config;
      if (!config_path.empty() && !preset.empty())
        throw std::invalid_argument("give either --config or --preset");
      if (!config_path.empty()) {
        config = load_config_file(config_path);
      } else if (!preset.empty()) {
        crimed::preset_instance(preset);  // validate the name
        config.preset = preset;
      } else {
        throw std::invalid_argument("run-experiment needs --config or --preset");
      }
      if (have_horizon) config.horizon = horizon;
      if (have_reps) config.reps = reps;
      if (have_seed) config.master_seed = seed;
      if (have_out) config.output_dir = out_dir;
      if (have_checkpoints) config.checkpoint_count = checkpoint_count;
      if (!policy_list.empty()) {
        config.policies.clear();
        std::string remaining = policy_list;
        while (!remaining.empty()) {
          const std::size_t comma = remaining.find(',');
          config.policies.push_back(crimed::PolicyDescriptor{
              remaining.substr(0, comma), {}, {}, {}});
          remaining =
              comma == std::string::npos ? "" : remaining.substr(comma + 1);
        }
      }
      if (config.horizon < 1)
        throw std::invalid_argument("horizon must be >= 1");
      if (config.reps < 1) throw std::invalid_argument("reps must be >= 1");
      return cmd_run_experiment(config, threads);
    }
    if (kl_cmd->parsed()) {
      if (!(kl_eps >= 0.0 && kl_eps < 0.5))
        throw std::invalid_argument("eps must lie in [0, 0.5)");
      return cmd_compute_kl(kl_x, kl_y, kl_eps);
    }
    if (conc_cmd->parsed()) {
      for (double y : grid_y)
        if (!(y >= 0.0 && y <= 1.0))
          throw std::invalid_argument("y must lie in [0, 1]");
      for (double e : grid_eps)
        if (!(e > 0.0 && e < 0.5))
          throw std::invalid_argument("eps must lie in (0, 0.5)");
      if (conc_reps < 1) throw std::invalid_argument("reps must be >= 1");
      return cmd_check_concentration(grid_n, grid_y, grid_eps, conc_reps,
                                     conc_seed, conc_out);
    }
    if (lb_cmd->parsed()) {
      if (lb_preset.empty() == lb_config.empty())
        throw std::invalid_argument("give exactly one of --preset/--config");
      const crimed::BanditInstance instance =
          !lb_preset.empty()
              ? crimed::preset_instance(lb_preset)
              : load_config_file(lb_config).resolve_instance();
      return cmd_lower_bound(instance);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
