#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cslam/geometry.hpp"
#include "cslam/recording.hpp"
#include "cslam/text_similarity.hpp"
#include "cslam/wifi.hpp"

namespace cslam {

struct KeyframeRef {
  std::string agent_id;
  int keyframe_id = 0;

  friend auto operator<=>(const KeyframeRef&, const KeyframeRef&) = default;
  friend bool operator==(const KeyframeRef&, const KeyframeRef&) = default;
};

std::string to_string(const KeyframeRef& ref);

struct Keyframe {
  std::string agent_id;
  int keyframe_id = 0;
  double timestamp = 0.0;
  // Integrated odometry in the agent's own frame (identity at the first event).
  Pose2 odom_pose;
  // Odometric path length up to this keyframe.
  double odom_distance = 0.0;
  PointCloud2 scan;
  std::optional<TextObservation> text_obs;
  WifiFingerprint fingerprint;
  // Only present for simulated recordings.
  std::optional<Pose2> truth_pose;

  KeyframeRef ref() const { return {agent_id, keyframe_id}; }
};

struct KeyframeOptions {
  // Map keyframes (without text) are also emitted every `spacing_m` of odometric
  // travel, plus at the first and last scan.
  double spacing_m = 2.0;
  // Fingerprint window centred on the keyframe timestamp.
  double wifi_window_s = 3.0;
  RssFilterOptions rss_filter;
};

// Text-bearing keyframe for every text event (with the nearest-in-time scan),
// plus map keyframes along the trajectory. Ids increase with time.
std::vector<Keyframe> extract_keyframes(const Recording& recording,
                                        const KeyframeOptions& options = {});

struct Thresholds {
  double alpha = 0.8;
  double beta = 0.8;
  double gamma = 0.8;
  double min_loop_separation_s = 30.0;

  // Throws std::invalid_argument when out of range.
  void validate() const;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

enum class Modality { kFused, kTextOnly, kWifiOnly };

std::string to_string(Modality m);
Modality modality_from_string(const std::string& s);

enum class Verdict { kAccepted, kRejectedText, kRejectedMac, kRejectedRss };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct MatchOptions {
  // kTextOnly bypasses the WiFi gate, kWifiOnly the text gate (ablations).
  Modality modality = Modality::kFused;
  TextMatchOptions text;
  double sigma_scale_db = 10.0;
};

struct MatchCandidate {
  KeyframeRef a;
  KeyframeRef b;
  std::optional<double> text_score;
  WifiMatchScore wifi;
  bool wifi_evaluated = false;
  Verdict verdict = Verdict::kRejectedText;
  bool degenerate = false;

  bool accepted() const { return verdict == Verdict::kAccepted; }
  friend bool operator==(const MatchCandidate&, const MatchCandidate&) = default;
};

// Index pairs (i < j) into `keyframes`: every cross-agent pair of text
// keyframes, and same-agent text pairs at least min_loop_separation_s apart.
std::vector<std::pair<std::size_t, std::size_t>> generate_candidates(
    std::span<const Keyframe> keyframes, const Thresholds& th);

// Text gate first; WiFi only if the text gate passes. Verdict names the
// first failing gate. Both keyframes must carry a text observation.
MatchCandidate decide_match(const Keyframe& a, const Keyframe& b, const Thresholds& th,
                            const MatchOptions& options = {});

// Threshold-independent scores of a pair, every indicator evaluated.
struct PairScores {
  double text_score = 0.0;
  WifiMatchScore wifi;
  // Either fingerprint is empty.
  bool fingerprint_missing = false;
};

PairScores score_pair(const Keyframe& a, const Keyframe& b,
                      const MatchOptions& options = {});

// Applies the gates of `modality` to precomputed scores; agrees with
// decide_match on the verdict.
Verdict gate_scores(const PairScores& scores, const Thresholds& th, Modality modality);

std::vector<MatchCandidate> match_all(std::span<const Keyframe> keyframes,
                                      const Thresholds& th,
                                      const MatchOptions& options = {});

// Connected components of the graph of accepted candidates. Each component is
// sorted; components are ordered by their first member.
std::vector<std::vector<KeyframeRef>> verified_locations(
    std::span<const MatchCandidate> candidates);

}  // namespace cslam
