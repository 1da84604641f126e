#include "cslam/place_recognition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace cslam {

std::string to_string(const KeyframeRef& ref) {
  return ref.agent_id + ":" + std::to_string(ref.keyframe_id);
}

namespace {

struct TimedPose {
  double t;
  Pose2 pose;
  double distance;
};

struct TimedScan {
  double t;
  const ScanEvent* scan;
};

template <typename T>
const T* latest_at(const std::vector<T>& series, double t) {
  auto it = std::upper_bound(series.begin(), series.end(), t,
                             [](double value, const T& s) { return value < s.t; });
  if (it == series.begin()) {
    return nullptr;
  }
  return &*(it - 1);
}

}  // namespace

std::vector<Keyframe> extract_keyframes(const Recording& recording,
                                        const KeyframeOptions& options) {
  std::vector<TimedPose> odom{{-INFINITY, Pose2::identity(), 0.0}};
  struct TimedTruth {
    double t;
    Pose2 pose;
  };
  std::vector<TimedTruth> truth;
  std::vector<TimedScan> scans;
  std::vector<WifiScan> wifi;
  struct TimedText {
    double t;
    const TextEvent* text;
  };
  std::vector<TimedText> texts;

  for (const Event& e : recording.events) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, OdomEvent>) {
            const TimedPose& last = odom.back();
            odom.push_back({e.t, compose(last.pose, Pose2(p.dx, p.dy, p.dtheta)),
                            last.distance + std::hypot(p.dx, p.dy)});
          } else if constexpr (std::is_same_v<T, TruthEvent>) {
            truth.push_back({e.t, p.pose});
          } else if constexpr (std::is_same_v<T, ScanEvent>) {
            scans.push_back({e.t, &p});
          } else if constexpr (std::is_same_v<T, WifiEvent>) {
            wifi.push_back({e.t, recording.agent_id, p.readings});
          } else if constexpr (std::is_same_v<T, TextEvent>) {
            if (!p.text.empty()) {
              texts.push_back({e.t, &p});
            }
          }
        },
        e.payload);
  }

  std::vector<Keyframe> out;
  if (scans.empty()) {
    return out;
  }

  auto nearest_scan = [&](double t) -> const TimedScan& {
    auto it = std::lower_bound(scans.begin(), scans.end(), t,
                               [](const TimedScan& s, double value) { return s.t < value; });
    if (it == scans.end()) return scans.back();
    if (it == scans.begin()) return *it;
    return (t - (it - 1)->t <= it->t - t) ? *(it - 1) : *it;
  };

  auto make = [&](double t, const TimedScan& scan) {
    Keyframe kf;
    kf.agent_id = recording.agent_id;
    kf.keyframe_id = static_cast<int>(out.size());
    kf.timestamp = t;
    const TimedPose* pose = latest_at(odom, t);
    kf.odom_pose = pose->pose;
    kf.odom_distance = pose->distance;
    kf.scan.points = scan.scan->points;
    kf.scan.frame_id = recording.agent_id + ":" + std::to_string(kf.keyframe_id);
    if (const TimedTruth* tp = latest_at(truth, t)) {
      kf.truth_pose = tp->pose;
    }
    const std::vector<WifiScan> window = scans_in_window(wifi, t, options.wifi_window_s);
    kf.fingerprint = build_fingerprint(window, kf.scan.frame_id, options.rss_filter);
    return kf;
  };

  std::size_t next_text = 0;
  double last_kf_distance = -INFINITY;
  double last_kf_time = -INFINITY;
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const double t = scans[i].t;
    // Text events up to and including this scan time.
    while (next_text < texts.size() && texts[next_text].t <= t) {
      const TimedText& tx = texts[next_text++];
      if (tx.t <= last_kf_time) {
        continue;  // keep timestamps strictly increasing
      }
      Keyframe kf = make(tx.t, nearest_scan(tx.t));
      kf.text_obs = TextObservation{tx.t, recording.agent_id, tx.text->text, tx.text->sign_id};
      last_kf_distance = kf.odom_distance;
      last_kf_time = kf.timestamp;
      out.push_back(std::move(kf));
    }
    if (t <= last_kf_time) {
      continue;
    }
    const double travelled = latest_at(odom, t)->distance;
    const bool first = out.empty();
    const bool last = (i + 1 == scans.size());
    if (first || last || travelled - last_kf_distance >= options.spacing_m) {
      Keyframe kf = make(t, scans[i]);
      last_kf_distance = kf.odom_distance;
      last_kf_time = t;
      out.push_back(std::move(kf));
    }
  }
  // Text after the final scan.
  for (; next_text < texts.size(); ++next_text) {
    const TimedText& tx = texts[next_text];
    if (tx.t <= last_kf_time) continue;
    Keyframe kf = make(tx.t, nearest_scan(tx.t));
    kf.text_obs = TextObservation{tx.t, recording.agent_id, tx.text->text, tx.text->sign_id};
    last_kf_time = kf.timestamp;
    out.push_back(std::move(kf));
  }
  return out;
}

void Thresholds::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(alpha) || !unit(beta) || !unit(gamma)) {
    throw std::invalid_argument("thresholds must lie in [0, 1]");
  }
  if (!(min_loop_separation_s >= 0.0)) {
    throw std::invalid_argument("min_loop_separation_s must be non-negative");
  }
}

std::string to_string(Modality m) {
  switch (m) {
    case Modality::kFused: return "fused";
    case Modality::kTextOnly: return "text_only";
    case Modality::kWifiOnly: return "wifi_only";
  }
  return "fused";
}

Modality modality_from_string(const std::string& s) {
  if (s == "fused") return Modality::kFused;
  if (s == "text_only") return Modality::kTextOnly;
  if (s == "wifi_only") return Modality::kWifiOnly;
  throw std::invalid_argument("unknown modality: " + s);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kAccepted: return "accepted";
    case Verdict::kRejectedText: return "rejected_text";
    case Verdict::kRejectedMac: return "rejected_mac";
    case Verdict::kRejectedRss: return "rejected_rss";
  }
  return "rejected_text";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "accepted") return Verdict::kAccepted;
  if (s == "rejected_text") return Verdict::kRejectedText;
  if (s == "rejected_mac") return Verdict::kRejectedMac;
  if (s == "rejected_rss") return Verdict::kRejectedRss;
  throw std::invalid_argument("unknown verdict: " + s);
}

std::vector<std::pair<std::size_t, std::size_t>> generate_candidates(
    std::span<const Keyframe> keyframes, const Thresholds& th) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < keyframes.size(); ++i) {
    if (!keyframes[i].text_obs) continue;
    for (std::size_t j = i + 1; j < keyframes.size(); ++j) {
      if (!keyframes[j].text_obs) continue;
      if (keyframes[i].agent_id == keyframes[j].agent_id &&
          std::abs(keyframes[i].timestamp - keyframes[j].timestamp) <
              th.min_loop_separation_s) {
        continue;
      }
      out.emplace_back(i, j);
    }
  }
  return out;
}

namespace {

double text_score_of(const Keyframe& a, const Keyframe& b, const MatchOptions& options) {
  if (!a.text_obs || !b.text_obs) {
    throw std::invalid_argument("decide_match: keyframe without text observation");
  }
  return text_similarity(a.text_obs->text, b.text_obs->text, options.text);
}

}  // namespace

MatchCandidate decide_match(const Keyframe& a, const Keyframe& b, const Thresholds& th,
                            const MatchOptions& options) {
  MatchCandidate c;
  c.a = a.ref();
  c.b = b.ref();
  c.text_score = text_score_of(a, b, options);
  if (options.modality != Modality::kWifiOnly && *c.text_score < th.alpha) {
    c.verdict = Verdict::kRejectedText;
    return c;
  }
  if (options.modality != Modality::kTextOnly) {
    c.wifi_evaluated = true;
    if (a.fingerprint.empty() || b.fingerprint.empty()) {
      c.wifi.degenerate = true;
      c.degenerate = true;
      c.verdict = Verdict::kRejectedMac;
      return c;
    }
    const WifiMatchResult wifi =
        is_wifi_match(a.fingerprint, b.fingerprint, {th.beta, th.gamma, options.sigma_scale_db});
    c.wifi = wifi.score;
    c.degenerate = wifi.score.degenerate;
    if (!wifi.match) {
      c.verdict = wifi.outcome == WifiGateOutcome::kRejectedMac ? Verdict::kRejectedMac
                                                                 : Verdict::kRejectedRss;
      return c;
    }
  }
  c.verdict = Verdict::kAccepted;
  return c;
}

PairScores score_pair(const Keyframe& a, const Keyframe& b, const MatchOptions& options) {
  PairScores s;
  s.text_score = text_score_of(a, b, options);
  s.wifi = score_wifi(a.fingerprint, b.fingerprint, options.sigma_scale_db);
  s.fingerprint_missing = a.fingerprint.empty() || b.fingerprint.empty();
  return s;
}

Verdict gate_scores(const PairScores& scores, const Thresholds& th, Modality modality) {
  if (modality != Modality::kWifiOnly && scores.text_score < th.alpha) {
    return Verdict::kRejectedText;
  }
  if (modality != Modality::kTextOnly) {
    if (scores.fingerprint_missing) {
      return Verdict::kRejectedMac;
    }
    if (scores.wifi.mac_similarity < th.beta) {
      return Verdict::kRejectedMac;
    }
    if (!scores.wifi.rss_similarity || *scores.wifi.rss_similarity < th.gamma) {
      return Verdict::kRejectedRss;
    }
  }
  return Verdict::kAccepted;
}

std::vector<MatchCandidate> match_all(std::span<const Keyframe> keyframes,
                                      const Thresholds& th, const MatchOptions& options) {
  th.validate();
  std::vector<MatchCandidate> out;
  for (const auto& [i, j] : generate_candidates(keyframes, th)) {
    out.push_back(decide_match(keyframes[i], keyframes[j], th, options));
  }
  return out;
}

std::vector<std::vector<KeyframeRef>> verified_locations(
    std::span<const MatchCandidate> candidates) {
  std::map<KeyframeRef, std::size_t> index;
  std::vector<KeyframeRef> refs;
  auto id_of = [&](const KeyframeRef& r) {
    auto [it, inserted] = index.emplace(r, refs.size());
    if (inserted) refs.push_back(r);
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const MatchCandidate& c : candidates) {
    if (c.accepted()) {
      const std::size_t ia = id_of(c.a);
      const std::size_t ib = id_of(c.b);
      edges.emplace_back(ia, ib);
    }
  }
  std::vector<std::size_t> parent(refs.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [a, b] : edges) {
    parent[find(a)] = find(b);
  }
  std::map<std::size_t, std::vector<KeyframeRef>> groups;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    groups[find(i)].push_back(refs[i]);
  }
  std::vector<std::vector<KeyframeRef>> out;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return out;
}

}  // namespace cslam
