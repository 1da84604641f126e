#include "cslam/evaluation.hpp"

#include <limits>
#include <stdexcept>

namespace cslam {

namespace {

const std::string& sign_of(const Keyframe& k) {
  if (!k.text_obs || !k.text_obs->sign_id_truth) {
    throw std::invalid_argument("keyframe " + to_string(k.ref()) +
                                " has no ground-truth sign id; metrics need simulated data");
  }
  return *k.text_obs->sign_id_truth;
}

}  // namespace

bool same_sign(const Keyframe& a, const Keyframe& b) { return sign_of(a) == sign_of(b); }

PrMetrics pr_from_counts(Modality modality, const Thresholds& th, std::size_t tp,
                         std::size_t fp, std::size_t fn) {
  PrMetrics m;
  m.modality = modality;
  m.thresholds = th;
  m.true_positives = tp;
  m.false_positives = fp;
  m.false_negatives = fn;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return m;
}

PrMetrics score_candidates(std::span<const MatchCandidate> candidates,
                           std::span<const Keyframe> keyframes, Modality modality,
                           const Thresholds& th) {
  std::map<KeyframeRef, const Keyframe*> by_ref;
  for (const Keyframe& k : keyframes) by_ref[k.ref()] = &k;
  auto lookup = [&](const KeyframeRef& r) -> const Keyframe& {
    auto it = by_ref.find(r);
    if (it == by_ref.end()) throw std::invalid_argument("candidate refers to unknown keyframe " + to_string(r));
    return *it->second;
  };
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const MatchCandidate& c : candidates) {
    const bool correct = same_sign(lookup(c.a), lookup(c.b));
    if (c.accepted()) {
      (correct ? tp : fp) += 1;
    } else if (correct) {
      ++fn;
    }
  }
  return pr_from_counts(modality, th, tp, fp, fn);
}

LabeledPairs label_pairs(std::span<const Keyframe> keyframes, const Thresholds& th,
                         const MatchOptions& options) {
  LabeledPairs out;
  out.pairs = generate_candidates(keyframes, th);
  out.scores.reserve(out.pairs.size());
  out.correct.reserve(out.pairs.size());
  for (const auto& [i, j] : out.pairs) {
    out.correct.push_back(same_sign(keyframes[i], keyframes[j]));
    out.scores.push_back(score_pair(keyframes[i], keyframes[j], options));
  }
  return out;
}

PrMetrics evaluate_gate(const LabeledPairs& data, Modality modality, const Thresholds& th) {
  th.validate();
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t k = 0; k < data.pairs.size(); ++k) {
    const bool accepted = gate_scores(data.scores[k], th, modality) == Verdict::kAccepted;
    if (accepted) {
      (data.correct[k] ? tp : fp) += 1;
    } else if (data.correct[k]) {
      ++fn;
    }
  }
  return pr_from_counts(modality, th, tp, fp, fn);
}

std::vector<PrMetrics> threshold_sweep(const LabeledPairs& data,
                                       std::span<const double> alphas,
                                       std::span<const double> betas_gammas,
                                       double min_loop_separation_s) {
  if (alphas.empty() || betas_gammas.empty()) {
    throw std::invalid_argument("threshold_sweep: threshold lists must be non-empty");
  }
  std::vector<PrMetrics> rows;
  for (double a : alphas) {
    rows.push_back(evaluate_gate(data, Modality::kTextOnly, {a, 0.0, 0.0, min_loop_separation_s}));
  }
  for (double v : betas_gammas) {
    rows.push_back(evaluate_gate(data, Modality::kWifiOnly, {0.0, v, v, min_loop_separation_s}));
  }
  for (double a : alphas) {
    for (double v : betas_gammas) {
      rows.push_back(evaluate_gate(data, Modality::kFused, {a, v, v, min_loop_separation_s}));
    }
  }
  return rows;
}

const Keyframe& anchor_keyframe(std::span<const Keyframe> keyframes, const Anchor& anchor,
                                double radius_m) {
  const Keyframe* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Keyframe& k : keyframes) {
    if (k.agent_id != anchor.agent_id || !k.truth_pose) continue;
    const double d = distance(k.truth_pose->translation(), anchor.position);
    if (d < best_d) {
      best_d = d;
      best = &k;
    }
  }
  if (!best || best_d > radius_m) {
    throw std::runtime_error("anchor " + anchor.label + " was not visited by agent " +
                             anchor.agent_id);
  }
  return *best;
}

EpeReport end_point_error(const std::map<KeyframeRef, Pose2>& poses,
                          std::span<const Keyframe> keyframes, const FloorPlan& plan,
                          const std::pair<std::string, std::string>& anchor_pair,
                          double travel_distance_m) {
  auto resolve = [&](const std::string& label) -> const Keyframe& {
    const Anchor* a = plan.find_anchor(label);
    if (!a) throw std::runtime_error("unknown anchor " + label);
    return anchor_keyframe(keyframes, *a);
  };
  const Keyframe& ka = resolve(anchor_pair.first);
  const Keyframe& kb = resolve(anchor_pair.second);
  auto pa = poses.find(ka.ref());
  auto pb = poses.find(kb.ref());
  if (pa == poses.end() || pb == poses.end()) {
    throw std::runtime_error("pose estimate lacks an anchor keyframe");
  }
  EpeReport r;
  r.anchor_pair = anchor_pair;
  r.keyframe_a = ka.ref();
  r.keyframe_b = kb.ref();
  r.estimated_separation_m = distance(pa->second.translation(), pb->second.translation());
  r.travel_distance_m = travel_distance_m;
  return r;
}

}  // namespace cslam
