#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crimed/environments.hpp"
#include "crimed/policies.hpp"

namespace crimed {

// Name plus the few optional knobs a policy accepts. eps / eps_m / sigma
// default to the instance's values.
struct PolicyDescriptor {
  std::string name;  // crimed | crimed_star | imed | med_ucb |
                     // crimed_m | crimed_star_m
  std::optional<double> eps;
  std::optional<double> eps_m;
  std::optional<double> width_multiplier;  // med_ucb only

  bool operator==(const PolicyDescriptor&) const = default;
};

std::unique_ptr<Policy> make_policy(const PolicyDescriptor& descriptor,
                                    const BanditInstance& instance,
                                    long horizon);

std::vector<std::string> known_policy_names();

struct StepRecord {
  long step = 0;
  std::size_t arm = 0;
  double true_reward = 0.0;
  double observation = 0.0;
  bool corrupted = false;
};

struct RunTrace {
  std::vector<long> checkpoints;
  std::vector<double> pseudo_regret;    // at each checkpoint
  std::vector<double> realized_regret;  // at each checkpoint
  std::vector<long> final_pull_counts;
  double final_pseudo_regret = 0.0;
  std::vector<StepRecord> steps;  // populated only when record_steps
};

// Executes select -> pull -> update for `horizon` steps. The policy sees
// observations only. Checkpoints must be sorted, unique, in [1, horizon].
RunTrace run(const BanditInstance& instance, Policy& policy, long horizon,
             Rng& rng, const std::vector<long>& checkpoints,
             bool record_steps = false);

// Descriptor convenience used by Monte Carlo replication.
RunTrace run(const BanditInstance& instance,
             const PolicyDescriptor& descriptor, long horizon,
             std::uint64_t seed, const std::vector<long>& checkpoints,
             bool record_steps = false);

struct MonteCarloSummary {
  std::vector<long> checkpoints;
  std::vector<double> mean_regret;
  std::vector<double> p5;
  std::vector<double> p95;
  std::vector<double> per_rep_final;     // pseudo-regret at horizon, by rep
  std::vector<double> mean_pull_counts;  // per arm
  double wall_seconds = 0.0;
};

// reps independent runs with seeds derive_seed(master_seed, rep).
// Aggregation is by rep index, so thread scheduling cannot change results;
// threads <= 0 picks the hardware count, capped by CRIMED_THREADS.
MonteCarloSummary monte_carlo(const BanditInstance& instance,
                              const PolicyDescriptor& descriptor, long horizon,
                              int reps, std::uint64_t master_seed,
                              const std::vector<long>& checkpoints,
                              int threads = 0);

// Nearest-rank percentile of a sample (p in [0, 100]).
double percentile(std::vector<double> values, double p);

// 1..horizon, log-spaced, deduplicated, horizon always included.
std::vector<long> log_spaced_checkpoints(long horizon, int count);

struct LowerBoundReport {
  struct ArmSlope {
    std::size_t arm = 0;
    double gap = 0.0;    // raw mean gap
    double slope = 0.0;  // 1 / kl_eps_gauss(gap/sigma) ; inf when gap too small
    bool finite = false;
    bool optimal = false;
  };
  std::vector<ArmSlope> slopes;
  // sum of gap * slope over suboptimal arms; infinity if any slope is.
  double regret_coefficient = 0.0;
};

// Asymptotic log-regret slopes from the instance geometry. Arms whose
// standardized gap is within delta_min get an infinite slope: logarithmic
// regret is unattainable there.
LowerBoundReport lower_bound_report(const BanditInstance& instance, Eps eps);

int worker_thread_count(int requested, int reps);

}  // namespace crimed
