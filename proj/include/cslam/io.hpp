#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cslam/floorplan.hpp"
#include "cslam/map_alignment.hpp"
#include "cslam/pipeline.hpp"
#include "cslam/place_recognition.hpp"
#include "cslam/recording.hpp"
#include "cslam/simulator.hpp"

namespace cslam {

// Malformed or unreadable file content.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest text that parses back to exactly `v`.
std::string format_double(double v);

std::string floorplan_to_text(const FloorPlan& plan);
FloorPlan floorplan_from_text(const std::string& text);

std::string scripts_to_text(const std::vector<AgentScript>& scripts);
std::vector<AgentScript> scripts_from_text(const std::string& text);

// One JSON object per line: {"t", "agent", "kind", "payload"}.
void write_recording(std::ostream& os, const Recording& recording);
// `agent_id` names the recording when it has no events.
Recording read_recording(std::istream& is, const std::string& agent_id);

struct MatchReport {
  Thresholds thresholds;
  Modality modality = Modality::kFused;
  double sigma_scale_db = 10.0;
  std::vector<MatchCandidate> candidates;

  friend bool operator==(const MatchReport&, const MatchReport&) = default;
};

// A header line followed by one line per candidate.
void write_match_report(std::ostream& os, const MatchReport& report);
MatchReport read_match_report(std::istream& is);

// Columns agent,keyframe_id,t_s,x_m,y_m,theta_rad,component for one agent.
void write_trajectory_csv(std::ostream& os, const std::vector<Keyframe>& keyframes,
                          const AlignmentSummary& alignment, const std::string& agent_id);
// Adds the rows of one trajectory file to `out`.
void read_trajectory_csv(std::istream& is, AlignmentSummary& out);

void write_point_csv(std::ostream& os, const PointCloud2& cloud);

std::string alignment_to_text(const AlignmentResult& alignment);
// Loop-edge count from an alignment document.
std::size_t loop_edges_from_text(const std::string& text);

std::string metrics_to_text(const MetricsReport& report);
MetricsReport metrics_from_text(const std::string& text);

// Whole-file helpers; throw FormatError when unreadable.
std::string read_file(const std::filesystem::path& path);
// Creates parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cslam
