#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cslam/pipeline.hpp"
#include "cslam/simulator.hpp"

namespace cslam {

// Invalid configuration or command-line input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string scenario = "scene01";
  std::uint64_t seed = 7;
  // Replace the scenario's floor plan or agent scripts with files.
  std::optional<std::filesystem::path> floorplan_path;
  std::optional<std::filesystem::path> scripts_path;
  bool noise_free = false;
  bool unique_texts = false;
  // Script parameter overrides by agent id; "*" applies to every agent and
  // is applied first.
  std::map<std::string, std::map<std::string, double>> agent_overrides;
  PipelineOptions pipeline;
  std::filesystem::path out_dir = "run";
};

// Parameter names accepted in agent overrides.
const std::vector<std::string>& agent_override_keys();

// Relative paths resolve against `base_dir`. Throws ConfigError on unknown
// keys, out-of-range thresholds or missing referenced files.
RunConfig config_from_text(const std::string& text, const std::filesystem::path& base_dir = {});
std::string config_to_text(const RunConfig& config);

// Throws ConfigError on a semantically invalid configuration.
void validate(const RunConfig& config);

// Throws ConfigError naming an unknown agent or parameter.
void apply_agent_overrides(std::vector<AgentScript>& scripts, const RunConfig& config);

}  // namespace cslam
