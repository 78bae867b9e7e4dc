#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crimed/corrupted_kl.hpp"

namespace crimed {

// A simple parametric law used for misspecification mixtures and corruption
// channels.
struct DistributionSpec {
  enum class Kind { kGaussian, kCauchy, kPointMass };

  Kind kind = Kind::kGaussian;
  double location = 0.0;
  double scale = 1.0;

  double sample(Rng& rng) const;
  // Mean when it exists (Cauchy has none).
  std::optional<double> mean() const;

  bool operator==(const DistributionSpec&) const = default;
};

// Gaussian arm, optionally mixed with a misspecification law:
//   (1 - misspec_weight) N(mean, sigma^2) + misspec_weight * misspec_law.
struct ArmModel {
  double gaussian_mean = 0.0;
  double gaussian_sigma = 1.0;
  double misspec_weight = 0.0;  // eps^(m) in [0, 0.5)
  std::optional<DistributionSpec> misspec_law;
  double misspec_mean_gap = 0.0;  // metadata bound on |mean(misspec) - mean|

  // Mean of the mixture; pseudo-regret gaps are taken against this.
  double effective_mean() const;
  double sample(Rng& rng) const;

  bool operator==(const ArmModel&) const = default;
};

// Worst-case channel: corruption samples are drawn from the H1 of the
// optimal pair (0, target_gap/sigma), shifted and scaled onto the arm, so
// that the observation law equals the optimally corrupted density.
struct HuberPairAdversary {
  double target_gap = 1.0;

  bool operator==(const HuberPairAdversary&) const = default;
};

using CorruptionLaw = std::variant<DistributionSpec, HuberPairAdversary>;

// What the agent observes: the true sample with probability 1 - eps, else a
// draw from the law scheduled for the current step. A single entry covering
// all steps encodes a time-invariant channel.
struct CorruptionChannel {
  struct ScheduleEntry {
    long first_step = 1;  // inclusive, 1-based
    long last_step = -1;  // inclusive; -1 = unbounded
    CorruptionLaw law;

    bool operator==(const ScheduleEntry&) const = default;
  };

  Eps eps{0.0};
  std::vector<ScheduleEntry> schedule;

  static CorruptionChannel none();
  static CorruptionChannel fixed(Eps eps, CorruptionLaw law);

  const CorruptionLaw* law_at_step(long step) const;

  bool operator==(const CorruptionChannel&) const = default;
};

struct BanditInstance {
  std::vector<ArmModel> arms;
  std::vector<CorruptionChannel> channels;  // one per arm

  std::size_t num_arms() const { return arms.size(); }
  std::vector<double> effective_means() const;
  std::size_t optimal_arm() const;  // lowest index among maximisers
  std::vector<double> gaps() const;

  // Uniform across arms in every preset; throws if arms disagree.
  double common_sigma() const;
  Eps common_eps() const;
  double common_misspec_weight() const;

  bool operator==(const BanditInstance&) const = default;
};

struct PullResult {
  double true_reward = 0.0;
  double observation = 0.0;
  bool was_corrupted = false;  // diagnostic only, never shown to policies
};

// One interaction: true reward from the arm law, observation through the
// corruption channel at step `step` (1-based).
PullResult pull(const BanditInstance& instance, std::size_t arm, long step,
                Rng& rng);

// The experiment configurations: setting1 .. setting5.
BanditInstance preset_instance(std::string_view name);

std::vector<std::string> preset_names();

}  // namespace crimed
