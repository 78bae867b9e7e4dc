#include "crimed/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace crimed {

std::unique_ptr<Policy> make_policy(const PolicyDescriptor& descriptor,
                                    const BanditInstance& instance,
                                    long horizon) {
  const std::size_t num_arms = instance.num_arms();
  const double sigma = instance.common_sigma();
  const Eps eps = descriptor.eps ? Eps(*descriptor.eps)
                                 : instance.common_eps();
  const double eps_m = descriptor.eps_m ? *descriptor.eps_m
                                        : instance.common_misspec_weight();

  if (descriptor.name == "crimed")
    return make_crimed(num_arms, horizon, eps, sigma);
  if (descriptor.name == "crimed_star")
    return make_crimed_star(num_arms, horizon, eps, sigma);
  if (descriptor.name == "imed") return make_imed(num_arms, horizon, sigma);
  if (descriptor.name == "med_ucb")
    return make_med_ucb(num_arms, horizon, eps, sigma,
                        descriptor.width_multiplier.value_or(2.0));
  if (descriptor.name == "crimed_m")
    return make_crimed_misspecified(num_arms, horizon, eps, eps_m, sigma,
                                    /*aggressive=*/false);
  if (descriptor.name == "crimed_star_m")
    return make_crimed_misspecified(num_arms, horizon, eps, eps_m, sigma,
                                    /*aggressive=*/true);
  throw std::invalid_argument("unknown policy: " + descriptor.name);
}

std::vector<std::string> known_policy_names() {
  return {"crimed", "crimed_star", "imed", "med_ucb", "crimed_m",
          "crimed_star_m"};
}

RunTrace run(const BanditInstance& instance, Policy& policy, long horizon,
             Rng& rng, const std::vector<long>& checkpoints,
             bool record_steps) {
  if (policy.required_initial_pulls() > horizon)
    throw std::invalid_argument(
        "horizon smaller than the policy's initialisation phase");
  if (!checkpoints.empty() &&
      (checkpoints.front() < 1 || checkpoints.back() > horizon))
    throw std::invalid_argument("checkpoints must lie in [1, horizon]");

  const std::vector<double> gaps = instance.gaps();
  const std::vector<double> means = instance.effective_means();
  const double best_mean =
      *std::max_element(means.begin(), means.end());

  RunTrace trace;
  trace.checkpoints = checkpoints;
  trace.pseudo_regret.reserve(checkpoints.size());
  trace.realized_regret.reserve(checkpoints.size());

  double pseudo = 0.0;
  double realized = 0.0;
  std::size_t next_checkpoint = 0;
  for (long step = 1; step <= horizon; ++step) {
    const std::size_t arm = policy.select_arm();
    const PullResult result = pull(instance, arm, step, rng);
    policy.update(arm, result.observation);

    pseudo += gaps[arm];
    realized += best_mean - result.true_reward;
    if (record_steps)
      trace.steps.push_back(StepRecord{step, arm, result.true_reward,
                                       result.observation,
                                       result.was_corrupted});
    while (next_checkpoint < checkpoints.size() &&
           checkpoints[next_checkpoint] == step) {
      trace.pseudo_regret.push_back(pseudo);
      trace.realized_regret.push_back(realized);
      ++next_checkpoint;
    }
  }

  trace.final_pseudo_regret = pseudo;
  trace.final_pull_counts.resize(instance.num_arms());
  for (std::size_t a = 0; a < instance.num_arms(); ++a)
    trace.final_pull_counts[a] = policy.pull_count(a);
  return trace;
}

RunTrace run(const BanditInstance& instance,
             const PolicyDescriptor& descriptor, long horizon,
             std::uint64_t seed, const std::vector<long>& checkpoints,
             bool record_steps) {
  auto policy = make_policy(descriptor, instance, horizon);
  Rng rng = make_rng(seed);
  return run(instance, *policy, horizon, rng, checkpoints, record_steps);
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of no data");
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(p / 100.0 * static_cast<double>(values.size()));
  const long index = std::clamp<long>(static_cast<long>(rank) - 1, 0,
                                      static_cast<long>(values.size()) - 1);
  return values[static_cast<std::size_t>(index)];
}

std::vector<long> log_spaced_checkpoints(long horizon, int count) {
  std::vector<long> points;
  if (horizon < 1) return points;
  const double log_max = std::log(static_cast<double>(horizon));
  for (int i = 0; i < count; ++i) {
    const double fraction =
        count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
    points.push_back(static_cast<long>(
        std::llround(std::exp(fraction * log_max))));
  }
  points.push_back(horizon);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

int worker_thread_count(int requested, int reps) {
  int threads = requested;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  if (const char* cap = std::getenv("CRIMED_THREADS")) {
    const int parsed = std::atoi(cap);
    if (parsed > 0) threads = std::min(threads, parsed);
  }
  return std::max(1, std::min(threads, reps));
}

MonteCarloSummary monte_carlo(const BanditInstance& instance,
                              const PolicyDescriptor& descriptor, long horizon,
                              int reps, std::uint64_t master_seed,
                              const std::vector<long>& checkpoints,
                              int threads) {
  if (reps < 1) throw std::invalid_argument("monte_carlo: reps must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  std::vector<RunTrace> traces(static_cast<std::size_t>(reps));
  const int workers = worker_thread_count(threads, reps);
  std::atomic<int> next_rep{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  const auto worker = [&]() {
    for (;;) {
      const int rep = next_rep.fetch_add(1);
      if (rep >= reps || failed.load()) break;
      try {
        traces[static_cast<std::size_t>(rep)] =
            run(instance, descriptor, horizon,
                derive_seed(master_seed, static_cast<std::uint64_t>(rep)),
                checkpoints);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failure = e.what();
        failed.store(true);
        break;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error("monte_carlo: " + failure);

  MonteCarloSummary summary;
  summary.checkpoints = checkpoints;
  const std::size_t num_checkpoints = checkpoints.size();
  summary.mean_regret.resize(num_checkpoints);
  summary.p5.resize(num_checkpoints);
  summary.p95.resize(num_checkpoints);

  std::vector<double> column(static_cast<std::size_t>(reps));
  for (std::size_t cp = 0; cp < num_checkpoints; ++cp) {
    double sum = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      column[static_cast<std::size_t>(rep)] =
          traces[static_cast<std::size_t>(rep)].pseudo_regret[cp];
      sum += column[static_cast<std::size_t>(rep)];
    }
    summary.mean_regret[cp] = sum / reps;
    summary.p5[cp] = percentile(column, 5.0);
    summary.p95[cp] = percentile(column, 95.0);
  }

  summary.per_rep_final.reserve(static_cast<std::size_t>(reps));
  for (const RunTrace& trace : traces)
    summary.per_rep_final.push_back(trace.final_pseudo_regret);

  summary.mean_pull_counts.assign(instance.num_arms(), 0.0);
  for (const RunTrace& trace : traces)
    for (std::size_t a = 0; a < instance.num_arms(); ++a)
      summary.mean_pull_counts[a] +=
          static_cast<double>(trace.final_pull_counts[a]) / reps;

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return summary;
}

LowerBoundReport lower_bound_report(const BanditInstance& instance, Eps eps) {
  const double sigma = instance.common_sigma();
  const std::vector<double> gaps = instance.gaps();
  const double dmin = delta_min(eps);

  LowerBoundReport report;
  double coefficient = 0.0;
  bool coefficient_finite = true;
  for (std::size_t a = 0; a < gaps.size(); ++a) {
    LowerBoundReport::ArmSlope slope;
    slope.arm = a;
    slope.gap = gaps[a];
    slope.optimal = gaps[a] == 0.0;
    if (slope.optimal) {
      slope.slope = 0.0;
      slope.finite = true;
    } else {
      const double standardized = gaps[a] / sigma;
      if (standardized <= dmin) {
        slope.slope = std::numeric_limits<double>::infinity();
        slope.finite = false;
        coefficient_finite = false;
      } else {
        slope.slope = 1.0 / kl_eps_gauss(0.0, standardized, eps);
        slope.finite = true;
        coefficient += gaps[a] * slope.slope;
      }
    }
    report.slopes.push_back(slope);
  }
  report.regret_coefficient =
      coefficient_finite ? coefficient
                         : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace crimed
