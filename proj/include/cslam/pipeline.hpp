#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cslam/evaluation.hpp"
#include "cslam/floorplan.hpp"
#include "cslam/map_alignment.hpp"
#include "cslam/place_recognition.hpp"
#include "cslam/recording.hpp"
#include "cslam/simulator.hpp"

namespace cslam {

struct PipelineOptions {
  KeyframeOptions keyframes;
  Thresholds thresholds;
  double sigma_scale_db = 10.0;
  TextMatchOptions text;
  AlignmentOptions alignment = [] {
    AlignmentOptions a;
    a.voxel_size = 0.1;
    return a;
  }();
  std::vector<double> sweep_alphas{0.5, 0.8, 1.0};
  std::vector<double> sweep_betas_gammas{0.5, 0.8, 1.0};
  // Thresholds of the single-modality end-point error variants.
  double text_only_epe_alpha = 1.0;
  double wifi_only_epe_beta_gamma = 1.0;

  MatchOptions match_options(Modality m) const { return {m, text, sigma_scale_db}; }
};

std::vector<Recording> simulate_all(const FloorPlan& plan, std::span<const AgentScript> scripts);

// Keyframes of every recording, concatenated in recording order.
std::vector<Keyframe> extract_all_keyframes(std::span<const Recording> recordings,
                                            const KeyframeOptions& options = {});

double total_travel_distance(std::span<const Recording> recordings);

struct EpeRow {
  std::string method;
  Thresholds thresholds;
  // Unset when the two anchor keyframes ended up in different components.
  std::optional<double> epe_m;
  std::size_t loop_edges = 0;
};

struct MetricsReport {
  std::string scenario;
  std::pair<std::string, std::string> anchors;
  double travel_distance_m = 0.0;
  std::vector<PrMetrics> location_recognition;
  std::vector<EpeRow> end_point_error;

  const EpeRow* epe(const std::string& method) const;
  const PrMetrics* recognition(Modality m, const Thresholds& th) const;
};

// What the evaluation needs from an alignment; also what the run directory stores.
struct AlignmentSummary {
  std::map<KeyframeRef, Pose2> poses;
  std::map<KeyframeRef, std::size_t> component_of;
  std::size_t loop_edges = 0;
};

AlignmentSummary summarize(const AlignmentResult& alignment);

// End-point error of an alignment, or nullopt if the anchors are not in one
// component.
std::optional<double> alignment_epe(const AlignmentSummary& alignment,
                                    std::span<const Keyframe> keyframes, const FloorPlan& plan,
                                    const std::pair<std::string, std::string>& anchors);

// The first two anchors of the plan. Throws std::runtime_error with fewer.
std::pair<std::string, std::string> epe_anchor_pair(const FloorPlan& plan);

// Recognition rows (three at the configured thresholds, or the full sweep)
// and end-point error rows: dead reckoning, text-only, WiFi-only, fused.
// `fused` is the alignment of the configured fused matches.
MetricsReport evaluate_run(const std::string& scenario, const FloorPlan& plan,
                           std::span<const Recording> recordings,
                           std::span<const Keyframe> keyframes, const AlignmentSummary& fused,
                           const PipelineOptions& options, bool sweep);

}  // namespace cslam
