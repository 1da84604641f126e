#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "cslam/config.hpp"
#include "cslam/io.hpp"

namespace cslam {

// Files of a run directory.
struct RunLayout {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "run_config.json"; }
  std::filesystem::path floorplan() const { return root / "floorplan.json"; }
  std::filesystem::path scripts() const { return root / "scripts.json"; }
  std::filesystem::path recordings() const { return root / "recordings"; }
  std::filesystem::path recording(const std::string& agent) const {
    return recordings() / (agent + ".jsonl");
  }
  std::filesystem::path match_report() const { return root / "match_report.jsonl"; }
  std::filesystem::path trajectories() const { return root / "trajectories"; }
  std::filesystem::path merged_map() const { return root / "merged_map.csv"; }
  std::filesystem::path alignment() const { return root / "alignment.json"; }
  std::filesystem::path metrics() const { return root / "metrics.json"; }
};

// Every command writes the effective configuration to run_config.json, then
// its own outputs, and prints a short summary to `log`. Failures throw.

// Floor plan and agent scripts of the configured scenario (or files).
void cmd_generate(const RunConfig& config, std::ostream& log);
// One recording per agent script.
void cmd_simulate(const RunConfig& config, std::ostream& log);
// Fused matching of every candidate pair at the configured thresholds.
void cmd_match(const RunConfig& config, std::ostream& log);
// Registration, pose graph optimisation, trajectories and merged map.
void cmd_align(const RunConfig& config, std::ostream& log);
// Recognition metrics (or the threshold grid) and end-point errors.
void cmd_evaluate(const RunConfig& config, bool sweep, std::ostream& log);
void cmd_run_all(const RunConfig& config, bool sweep, std::ostream& log);

// Recordings of a run directory, ordered by agent id.
std::vector<Recording> load_recordings(const RunLayout& layout);

}  // namespace cslam
