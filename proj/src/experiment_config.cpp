#include "crimed/experiment_config.hpp"

#include <stdexcept>

namespace crimed {

namespace {

using nlohmann::json;

void require_keys(const json& object, const char* where,
                  std::initializer_list<const char*> allowed) {
  if (!object.is_object())
    throw std::invalid_argument(std::string(where) + ": expected an object");
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (key == name) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument(std::string("unknown field \"") + key +
                                  "\" in " + where);
  }
}

DistributionSpec::Kind kind_from_string(const std::string& kind) {
  if (kind == "gaussian") return DistributionSpec::Kind::kGaussian;
  if (kind == "cauchy") return DistributionSpec::Kind::kCauchy;
  if (kind == "point_mass") return DistributionSpec::Kind::kPointMass;
  throw std::invalid_argument("unknown distribution kind \"" + kind + "\"");
}

std::string kind_to_string(DistributionSpec::Kind kind) {
  switch (kind) {
    case DistributionSpec::Kind::kGaussian:
      return "gaussian";
    case DistributionSpec::Kind::kCauchy:
      return "cauchy";
    case DistributionSpec::Kind::kPointMass:
      return "point_mass";
  }
  return "gaussian";
}

DistributionSpec distribution_from_json(const json& document,
                                        const char* where) {
  require_keys(document, where, {"kind", "location", "scale"});
  DistributionSpec spec;
  spec.kind = kind_from_string(document.at("kind").get<std::string>());
  spec.location = document.value("location", 0.0);
  spec.scale = document.value("scale", 1.0);
  return spec;
}

json distribution_to_json(const DistributionSpec& spec) {
  return json{{"kind", kind_to_string(spec.kind)},
              {"location", spec.location},
              {"scale", spec.scale}};
}

CorruptionLaw law_from_json(const json& document, const char* where) {
  if (document.is_object() && document.contains("kind") &&
      document.at("kind") == "huber_pair") {
    require_keys(document, where, {"kind", "target_gap"});
    return HuberPairAdversary{document.at("target_gap").get<double>()};
  }
  return distribution_from_json(document, where);
}

json law_to_json(const CorruptionLaw& law) {
  if (const auto* adversary = std::get_if<HuberPairAdversary>(&law))
    return json{{"kind", "huber_pair"}, {"target_gap", adversary->target_gap}};
  return distribution_to_json(std::get<DistributionSpec>(law));
}

ArmModel arm_from_json(const json& document) {
  require_keys(document, "arm",
               {"mean", "sigma", "misspec_weight", "misspec", "misspec_mean_gap"});
  ArmModel arm;
  arm.gaussian_mean = document.at("mean").get<double>();
  arm.gaussian_sigma = document.value("sigma", 1.0);
  arm.misspec_weight = document.value("misspec_weight", 0.0);
  if (document.contains("misspec"))
    arm.misspec_law = distribution_from_json(document.at("misspec"), "misspec");
  arm.misspec_mean_gap = document.value("misspec_mean_gap", 0.0);
  return arm;
}

json arm_to_json(const ArmModel& arm) {
  json document{{"mean", arm.gaussian_mean},
                {"sigma", arm.gaussian_sigma},
                {"misspec_weight", arm.misspec_weight},
                {"misspec_mean_gap", arm.misspec_mean_gap}};
  if (arm.misspec_law) document["misspec"] = distribution_to_json(*arm.misspec_law);
  return document;
}

CorruptionChannel channel_from_json(const json& document) {
  require_keys(document, "channel", {"eps", "law", "schedule"});
  CorruptionChannel channel;
  channel.eps = Eps(document.at("eps").get<double>());
  if (document.contains("law") && document.contains("schedule"))
    throw std::invalid_argument("channel: give either law or schedule");
  if (document.contains("law")) {
    channel.schedule.push_back(CorruptionChannel::ScheduleEntry{
        1, -1, law_from_json(document.at("law"), "law")});
  } else if (document.contains("schedule")) {
    for (const json& entry : document.at("schedule")) {
      require_keys(entry, "schedule entry", {"first_step", "last_step", "law"});
      channel.schedule.push_back(CorruptionChannel::ScheduleEntry{
          entry.value("first_step", 1L), entry.value("last_step", -1L),
          law_from_json(entry.at("law"), "schedule entry law")});
    }
  } else if (!channel.eps.is_zero()) {
    throw std::invalid_argument("channel with eps > 0 needs a law");
  }
  return channel;
}

json channel_to_json(const CorruptionChannel& channel) {
  json document{{"eps", channel.eps.value()}};
  if (channel.schedule.size() == 1 && channel.schedule[0].first_step == 1 &&
      channel.schedule[0].last_step == -1) {
    document["law"] = law_to_json(channel.schedule[0].law);
  } else if (!channel.schedule.empty()) {
    json entries = json::array();
    for (const auto& entry : channel.schedule)
      entries.push_back(json{{"first_step", entry.first_step},
                             {"last_step", entry.last_step},
                             {"law", law_to_json(entry.law)}});
    document["schedule"] = entries;
  }
  return document;
}

}  // namespace

BanditInstance instance_from_json(const json& document) {
  require_keys(document, "instance", {"arms", "channels"});
  BanditInstance instance;
  for (const json& arm : document.at("arms"))
    instance.arms.push_back(arm_from_json(arm));
  for (const json& channel : document.at("channels"))
    instance.channels.push_back(channel_from_json(channel));
  if (instance.arms.empty())
    throw std::invalid_argument("instance needs at least one arm");
  if (instance.arms.size() != instance.channels.size())
    throw std::invalid_argument("instance needs one channel per arm");
  return instance;
}

json to_json(const BanditInstance& instance) {
  json arms = json::array();
  for (const ArmModel& arm : instance.arms) arms.push_back(arm_to_json(arm));
  json channels = json::array();
  for (const CorruptionChannel& channel : instance.channels)
    channels.push_back(channel_to_json(channel));
  return json{{"arms", arms}, {"channels", channels}};
}

PolicyDescriptor policy_descriptor_from_json(const json& document) {
  if (document.is_string())
    return PolicyDescriptor{document.get<std::string>(), {}, {}, {}};
  require_keys(document, "policy", {"name", "eps", "eps_m", "width_multiplier"});
  PolicyDescriptor descriptor;
  descriptor.name = document.at("name").get<std::string>();
  if (document.contains("eps")) descriptor.eps = document.at("eps").get<double>();
  if (document.contains("eps_m"))
    descriptor.eps_m = document.at("eps_m").get<double>();
  if (document.contains("width_multiplier"))
    descriptor.width_multiplier =
        document.at("width_multiplier").get<double>();
  return descriptor;
}

json to_json(const PolicyDescriptor& descriptor) {
  json document{{"name", descriptor.name}};
  if (descriptor.eps) document["eps"] = *descriptor.eps;
  if (descriptor.eps_m) document["eps_m"] = *descriptor.eps_m;
  if (descriptor.width_multiplier)
    document["width_multiplier"] = *descriptor.width_multiplier;
  return document;
}

std::vector<PolicyDescriptor> default_policies(const std::string& preset) {
  if (preset == "setting4" || preset == "setting5")
    return {PolicyDescriptor{"crimed_m", {}, {}, {}},
            PolicyDescriptor{"crimed_star_m", {}, {}, {}},
            PolicyDescriptor{"imed", {}, {}, {}},
            PolicyDescriptor{"med_ucb", {}, {}, {}}};
  return {PolicyDescriptor{"crimed", {}, {}, {}},
          PolicyDescriptor{"crimed_star", {}, {}, {}},
          PolicyDescriptor{"imed", {}, {}, {}},
          PolicyDescriptor{"med_ucb", {}, {}, {}}};
}

BanditInstance ExperimentConfig::resolve_instance() const {
  if (instance) return *instance;
  return preset_instance(preset);
}

std::vector<PolicyDescriptor> ExperimentConfig::resolve_policies() const {
  if (!policies.empty()) return policies;
  return default_policies(preset);
}

ExperimentConfig parse_experiment_config(const json& document) {
  require_keys(document, "config",
               {"instance", "policies", "horizon", "reps", "master_seed",
                "checkpoint_count", "output_dir"});
  ExperimentConfig config;
  if (document.contains("instance")) {
    const json& instance = document.at("instance");
    if (instance.is_string())
      config.preset = instance.get<std::string>();
    else
      config.instance = instance_from_json(instance);
  } else {
    throw std::invalid_argument("config: missing field \"instance\"");
  }
  if (document.contains("policies"))
    for (const json& policy : document.at("policies"))
      config.policies.push_back(policy_descriptor_from_json(policy));
  config.horizon = document.value("horizon", config.horizon);
  config.reps = document.value("reps", config.reps);
  config.master_seed = document.value("master_seed", config.master_seed);
  config.checkpoint_count =
      document.value("checkpoint_count", config.checkpoint_count);
  config.output_dir = document.value("output_dir", config.output_dir);

  if (config.horizon < 1)
    throw std::invalid_argument("config: horizon must be >= 1");
  if (config.reps < 1) throw std::invalid_argument("config: reps must be >= 1");
  if (!config.preset.empty()) preset_instance(config.preset);  // validate name
  return config;
}

json to_json(const ExperimentConfig& config) {
  json document;
  if (config.instance)
    document["instance"] = to_json(*config.instance);
  else
    document["instance"] = config.preset;
  json policies = json::array();
  for (const PolicyDescriptor& descriptor : config.policies)
    policies.push_back(to_json(descriptor));
  document["policies"] = policies;
  document["horizon"] = config.horizon;
  document["reps"] = config.reps;
  document["master_seed"] = config.master_seed;
  document["checkpoint_count"] = config.checkpoint_count;
  document["output_dir"] = config.output_dir;
  return document;
}

}  // namespace crimed
