#include "cslam/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace cslam {

std::vector<Recording> simulate_all(const FloorPlan& plan, std::span<const AgentScript> scripts) {
  std::vector<Recording> out;
  out.reserve(scripts.size());
  for (const AgentScript& s : scripts) out.push_back(simulate_recording(plan, s));
  return out;
}

std::vector<Keyframe> extract_all_keyframes(std::span<const Recording> recordings,
                                            const KeyframeOptions& options) {
  std::vector<Keyframe> out;
  for (const Recording& r : recordings) {
    std::vector<Keyframe> k = extract_keyframes(r, options);
    out.insert(out.end(), std::make_move_iterator(k.begin()), std::make_move_iterator(k.end()));
  }
  return out;
}

double total_travel_distance(std::span<const Recording> recordings) {
  double sum = 0.0;
  for (const Recording& r : recordings) sum += truth_travel_distance(r);
  return sum;
}

const EpeRow* MetricsReport::epe(const std::string& method) const {
  for (const EpeRow& r : end_point_error) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

const PrMetrics* MetricsReport::recognition(Modality m, const Thresholds& th) const {
  for (const PrMetrics& r : location_recognition) {
    if (r.modality != m) continue;
    const bool text_ok = m == Modality::kWifiOnly || std::abs(r.thresholds.alpha - th.alpha) < 1e-12;
    const bool wifi_ok = m == Modality::kTextOnly ||
                         (std::abs(r.thresholds.beta - th.beta) < 1e-12 &&
                          std::abs(r.thresholds.gamma - th.gamma) < 1e-12);
    if (text_ok && wifi_ok) return &r;
  }
  return nullptr;
}

std::pair<std::string, std::string> epe_anchor_pair(const FloorPlan& plan) {
  if (plan.anchors.size() < 2) {
    throw std::runtime_error("floor plan needs two anchors for the end-point error");
  }
  return {plan.anchors[0].label, plan.anchors[1].label};
}

AlignmentSummary summarize(const AlignmentResult& alignment) {
  return {alignment.poses, alignment.component_of, alignment.build.graph.loop_edge_count()};
}

std::optional<double> alignment_epe(const AlignmentSummary& alignment,
                                    std::span<const Keyframe> keyframes, const FloorPlan& plan,
                                    const std::pair<std::string, std::string>& anchors) {
  const EpeReport r = end_point_error(alignment.poses, keyframes, plan, anchors, 0.0);
  if (alignment.component_of.at(r.keyframe_a) != alignment.component_of.at(r.keyframe_b)) {
    return std::nullopt;
  }
  return r.estimated_separation_m;
}

MetricsReport evaluate_run(const std::string& scenario, const FloorPlan& plan,
                           std::span<const Recording> recordings,
                           std::span<const Keyframe> keyframes, const AlignmentSummary& fused,
                           const PipelineOptions& options, bool sweep) {
  MetricsReport report;
  report.scenario = scenario;
  report.anchors = epe_anchor_pair(plan);
  report.travel_distance_m = total_travel_distance(recordings);

  const Thresholds& th = options.thresholds;
  const LabeledPairs labeled =
      label_pairs(keyframes, th, options.match_options(Modality::kFused));
  if (sweep) {
    report.location_recognition = threshold_sweep(labeled, options.sweep_alphas,
                                                  options.sweep_betas_gammas,
                                                  th.min_loop_separation_s);
  } else {
    report.location_recognition = {
        evaluate_gate(labeled, Modality::kTextOnly, {th.alpha, 0.0, 0.0, th.min_loop_separation_s}),
        evaluate_gate(labeled, Modality::kWifiOnly, {0.0, th.beta, th.gamma, th.min_loop_separation_s}),
        evaluate_gate(labeled, Modality::kFused, th)};
  }

  std::map<std::string, Pose2> starts;
  for (const Recording& r : recordings) {
    const std::optional<Pose2> p = first_truth_pose(r);
    if (!p) throw std::runtime_error("recording " + r.agent_id + " has no ground truth");
    starts[r.agent_id] = *p;
  }
  const auto dr = dead_reckoning(keyframes, starts);
  report.end_point_error.push_back(
      {"no_loop_closure", {0.0, 0.0, 0.0, th.min_loop_separation_s},
       end_point_error(dr, keyframes, plan, report.anchors, report.travel_distance_m)
           .estimated_separation_m,
       0});

  auto variant = [&](const std::string& name, Modality m, const Thresholds& vth) {
    const std::vector<MatchCandidate> c = match_all(keyframes, vth, options.match_options(m));
    const AlignmentSummary a = summarize(run_alignment(keyframes, c, options.alignment));
    report.end_point_error.push_back(
        {name, vth, alignment_epe(a, keyframes, plan, report.anchors), a.loop_edges});
  };
  variant("text_only", Modality::kTextOnly,
          {options.text_only_epe_alpha, 0.0, 0.0, th.min_loop_separation_s});
  const double bg = options.wifi_only_epe_beta_gamma;
  variant("wifi_only", Modality::kWifiOnly, {0.0, bg, bg, th.min_loop_separation_s});
  report.end_point_error.push_back(
      {"fused", th, alignment_epe(fused, keyframes, plan, report.anchors), fused.loop_edges});
  return report;
}

}  // namespace cslam
