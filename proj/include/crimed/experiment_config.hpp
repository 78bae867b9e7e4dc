#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "crimed/simulator.hpp"

namespace crimed {

// The run-experiment input file. Either a preset name or an inline instance
// descriptor; every field has a default so presets run with a one-line
// config. Unknown fields anywhere in the document are rejected by name.
struct ExperimentConfig {
  std::string preset;  // empty when an inline instance is given
  std::optional<BanditInstance> instance;
  std::vector<PolicyDescriptor> policies;  // empty -> preset defaults
  long horizon = 10000;
  int reps = 100;
  std::uint64_t master_seed = 1;
  int checkpoint_count = 100;  // log-spaced
  std::string output_dir = ".";

  BanditInstance resolve_instance() const;
  std::vector<PolicyDescriptor> resolve_policies() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Default policy set for a preset: the misspecified settings swap the
// CRIMED variants for their inflated-eps versions.
std::vector<PolicyDescriptor> default_policies(const std::string& preset);

ExperimentConfig parse_experiment_config(const nlohmann::json& document);
nlohmann::json to_json(const ExperimentConfig& config);

nlohmann::json to_json(const BanditInstance& instance);
BanditInstance instance_from_json(const nlohmann::json& document);

nlohmann::json to_json(const PolicyDescriptor& descriptor);
PolicyDescriptor policy_descriptor_from_json(const nlohmann::json& document);

}  // namespace crimed
