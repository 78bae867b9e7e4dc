#include "crimed/environments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crimed {

double DistributionSpec::sample(Rng& rng) const {
  switch (kind) {
    case Kind::kGaussian:
      return normal_sample(rng, location, scale);
    case Kind::kCauchy:
      return cauchy_sample(rng, location, scale);
    case Kind::kPointMass:
      return location;
  }
  return location;
}

std::optional<double> DistributionSpec::mean() const {
  if (kind == Kind::kCauchy) return std::nullopt;
  return location;
}

double ArmModel::effective_mean() const {
  if (misspec_weight == 0.0 || !misspec_law) return gaussian_mean;
  const auto misspec_mean = misspec_law->mean();
  if (!misspec_mean) return gaussian_mean;  // heavy-tailed misspecification
  return (1.0 - misspec_weight) * gaussian_mean +
         misspec_weight * *misspec_mean;
}

double ArmModel::sample(Rng& rng) const {
  if (misspec_weight > 0.0 && misspec_law &&
      bernoulli_sample(rng, misspec_weight))
    return misspec_law->sample(rng);
  return normal_sample(rng, gaussian_mean, gaussian_sigma);
}

CorruptionChannel CorruptionChannel::none() {
  CorruptionChannel channel;
  channel.eps = Eps(0.0);
  return channel;
}

CorruptionChannel CorruptionChannel::fixed(Eps eps, CorruptionLaw law) {
  CorruptionChannel channel;
  channel.eps = eps;
  channel.schedule.push_back(ScheduleEntry{1, -1, std::move(law)});
  return channel;
}

const CorruptionLaw* CorruptionChannel::law_at_step(long step) const {
  for (const ScheduleEntry& entry : schedule) {
    if (step >= entry.first_step &&
        (entry.last_step < 0 || step <= entry.last_step))
      return &entry.law;
  }
  return nullptr;
}

std::vector<double> BanditInstance::effective_means() const {
  std::vector<double> means;
  means.reserve(arms.size());
  for (const ArmModel& arm : arms) means.push_back(arm.effective_mean());
  return means;
}

std::size_t BanditInstance::optimal_arm() const {
  const std::vector<double> means = effective_means();
  return static_cast<std::size_t>(
      std::max_element(means.begin(), means.end()) - means.begin());
}

std::vector<double> BanditInstance::gaps() const {
  std::vector<double> means = effective_means();
  const double best = *std::max_element(means.begin(), means.end());
  for (double& m : means) m = best - m;
  return means;
}

double BanditInstance::common_sigma() const {
  if (arms.empty()) throw std::invalid_argument("instance has no arms");
  const double sigma = arms.front().gaussian_sigma;
  for (const ArmModel& arm : arms)
    if (arm.gaussian_sigma != sigma)
      throw std::invalid_argument("arms have differing sigma");
  return sigma;
}

Eps BanditInstance::common_eps() const {
  if (channels.empty()) throw std::invalid_argument("instance has no channels");
  const Eps eps = channels.front().eps;
  for (const CorruptionChannel& channel : channels)
    if (!(channel.eps == eps))
      throw std::invalid_argument("channels have differing eps");
  return eps;
}

double BanditInstance::common_misspec_weight() const {
  if (arms.empty()) throw std::invalid_argument("instance has no arms");
  const double weight = arms.front().misspec_weight;
  for (const ArmModel& arm : arms)
    if (arm.misspec_weight != weight)
      throw std::invalid_argument("arms have differing misspecification");
  return weight;
}

PullResult pull(const BanditInstance& instance, std::size_t arm_index,
                long step, Rng& rng) {
  if (arm_index >= instance.arms.size())
    throw std::out_of_range("pull: invalid arm index");
  const ArmModel& arm = instance.arms[arm_index];
  const CorruptionChannel& channel = instance.channels[arm_index];

  PullResult result;
  result.true_reward = arm.sample(rng);
  result.observation = result.true_reward;

  const double eps = channel.eps.value();
  if (eps > 0.0 && bernoulli_sample(rng, eps)) {
    const CorruptionLaw* law = channel.law_at_step(step);
    if (law != nullptr) {
      result.was_corrupted = true;
      if (const auto* spec = std::get_if<DistributionSpec>(law)) {
        result.observation = spec->sample(rng);
      } else {
        // Positive target gap: this arm plays the left member of the pair
        // and H1 tilts it up. Negative: it plays the right member and H2
        // tilts it down.
        const auto& adversary = std::get<HuberPairAdversary>(*law);
        const double sigma = arm.gaussian_sigma;
        const double gap = std::fabs(adversary.target_gap) / sigma;
        const CorruptedDensityPair pair =
            huber_pair_densities(0.0, gap, channel.eps);
        const double standardized =
            adversary.target_gap > 0.0
                ? sample_huber_corruption(pair, CorruptionSide::kLeft, rng)
                : sample_huber_corruption(pair, CorruptionSide::kRight, rng) -
                      gap;
        result.observation = arm.gaussian_mean + sigma * standardized;
      }
    }
  }
  return result;
}

namespace {

BanditInstance make_gaussian_setting(const std::vector<double>& means,
                                     double sigma, double eps,
                                     const std::vector<double>& out_locations,
                                     DistributionSpec::Kind out_kind,
                                     double out_scale) {
  BanditInstance instance;
  for (std::size_t a = 0; a < means.size(); ++a) {
    ArmModel arm;
    arm.gaussian_mean = means[a];
    arm.gaussian_sigma = sigma;
    instance.arms.push_back(arm);
    instance.channels.push_back(CorruptionChannel::fixed(
        Eps(eps),
        DistributionSpec{out_kind, out_locations[a], out_scale}));
  }
  return instance;
}

void add_misspecification(BanditInstance& instance, double weight,
                          const std::vector<double>& misspec_means,
                          double misspec_sigma) {
  for (std::size_t a = 0; a < instance.arms.size(); ++a) {
    ArmModel& arm = instance.arms[a];
    arm.misspec_weight = weight;
    arm.misspec_law = DistributionSpec{DistributionSpec::Kind::kGaussian,
                                       misspec_means[a], misspec_sigma};
    arm.misspec_mean_gap =
        std::fabs(misspec_means[a] - arm.gaussian_mean);
  }
}

}  // namespace

BanditInstance preset_instance(std::string_view name) {
  const std::vector<double> means{0.8, 0.9, 1.0};
  const double sigma = 0.5;

  if (name == "setting1")
    return make_gaussian_setting(means, sigma, 0.01, {1.0, 1.0, 0.8},
                                 DistributionSpec::Kind::kGaussian, 1.0);
  if (name == "setting2")
    return make_gaussian_setting(means, sigma, 0.01, {10.0, 10.0, -20.0},
                                 DistributionSpec::Kind::kGaussian, 1.0);
  if (name == "setting3")
    return make_gaussian_setting(means, sigma, 0.01, {10.0, 10.0, -20.0},
                                 DistributionSpec::Kind::kCauchy, 1.0);
  if (name == "setting4") {
    BanditInstance instance;
    const std::vector<double> misspec_means{0.6, 0.8, 1.0};
    for (std::size_t a = 0; a < misspec_means.size(); ++a) {
      ArmModel arm;
      arm.gaussian_mean = misspec_means[a];
      arm.gaussian_sigma = sigma;
      instance.arms.push_back(arm);
      instance.channels.push_back(CorruptionChannel::none());
    }
    add_misspecification(instance, 0.1, {3.0, 3.0, 3.0}, 0.5);
    return instance;
  }
  if (name == "setting5") {
    BanditInstance instance = preset_instance("setting4");
    for (std::size_t a = 0; a < instance.arms.size(); ++a) {
      const double location = a == 2 ? -20.0 : 10.0;
      instance.channels[a] = CorruptionChannel::fixed(
          Eps(0.01), DistributionSpec{DistributionSpec::Kind::kGaussian,
                                      location, 1.0});
    }
    return instance;
  }
  throw std::invalid_argument("unknown preset: " + std::string(name));
}

std::vector<std::string> preset_names() {
  return {"setting1", "setting2", "setting3", "setting4", "setting5"};
}

}  // namespace crimed
