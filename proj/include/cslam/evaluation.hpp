#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cslam/floorplan.hpp"
#include "cslam/geometry.hpp"
#include "cslam/place_recognition.hpp"

namespace cslam {

struct PrMetrics {
  Modality modality = Modality::kFused;
  Thresholds thresholds;
  // Unset when the denominator is zero.
  std::optional<double> precision;
  std::optional<double> recall;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  friend bool operator==(const PrMetrics&, const PrMetrics&) = default;
};

// True iff both keyframes saw the same physical sign. Throws
// std::invalid_argument when either keyframe lacks the simulator's sign id.
bool same_sign(const Keyframe& a, const Keyframe& b);

PrMetrics pr_from_counts(Modality modality, const Thresholds& th, std::size_t tp,
                         std::size_t fp, std::size_t fn);

// Counts the candidates' verdicts against sign identity.
PrMetrics score_candidates(std::span<const MatchCandidate> candidates,
                           std::span<const Keyframe> keyframes, Modality modality,
                           const Thresholds& th);

// Candidate pairs with threshold-free scores and truth labels, built once and
// re-gated for every threshold combination.
struct LabeledPairs {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<PairScores> scores;
  std::vector<bool> correct;
};

LabeledPairs label_pairs(std::span<const Keyframe> keyframes, const Thresholds& th,
                         const MatchOptions& options = {});

PrMetrics evaluate_gate(const LabeledPairs& data, Modality modality, const Thresholds& th);

// Text rows (one per alpha, WiFi thresholds reported as 0), WiFi rows (one per
// value, used for both beta and gamma, alpha reported as 0), then fused rows
// (every alpha with every value). Throws std::invalid_argument on empty lists.
std::vector<PrMetrics> threshold_sweep(const LabeledPairs& data,
                                       std::span<const double> alphas,
                                       std::span<const double> betas_gammas,
                                       double min_loop_separation_s = 30.0);

struct EpeReport {
  std::pair<std::string, std::string> anchor_pair;
  KeyframeRef keyframe_a;
  KeyframeRef keyframe_b;
  double estimated_separation_m = 0.0;
  double travel_distance_m = 0.0;
};

// Keyframe of the anchor's agent whose true position is nearest the anchor.
// Throws std::runtime_error when none lies within `radius_m`.
const Keyframe& anchor_keyframe(std::span<const Keyframe> keyframes, const Anchor& anchor,
                                double radius_m = 0.5);

// Distance between the estimated positions of the keyframes resolving the
// two anchors. Throws std::runtime_error for an unknown or unvisited anchor
// or when the estimate lacks one of the keyframes.
EpeReport end_point_error(const std::map<KeyframeRef, Pose2>& poses,
                          std::span<const Keyframe> keyframes, const FloorPlan& plan,
                          const std::pair<std::string, std::string>& anchor_pair,
                          double travel_distance_m);

}  // namespace cslam
