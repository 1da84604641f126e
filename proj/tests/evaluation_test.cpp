#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cslam/evaluation.hpp"
#include "cslam/pipeline.hpp"
#include "cslam/scenarios.hpp"

using namespace cslam;

namespace {

Keyframe text_keyframe(const std::string& agent, int id, const std::string& sign,
                       Pose2 truth = {}) {
  Keyframe k;
  k.agent_id = agent;
  k.keyframe_id = id;
  k.timestamp = 100.0 * id;
  k.text_obs = TextObservation{k.timestamp, agent, sign, sign};
  k.truth_pose = truth;
  return k;
}

MatchCandidate candidate(KeyframeRef a, KeyframeRef b, bool accepted) {
  MatchCandidate c;
  c.a = std::move(a);
  c.b = std::move(b);
  c.verdict = accepted ? Verdict::kAccepted : Verdict::kRejectedMac;
  return c;
}

struct World {
  Scenario scenario;
  std::vector<Recording> recordings;
  std::vector<Keyframe> keyframes;
};

World make_world(Scenario sc) {
  World w{std::move(sc), {}, {}};
  w.recordings = simulate_all(w.scenario.plan, w.scenario.scripts);
  w.keyframes = extract_all_keyframes(w.recordings);
  return w;
}

const World& scene01() {
  static const World w = make_world(scripted_scenario("scene01", 7));
  return w;
}

const World& scene01_noise_free() {
  static const World w = make_world(make_noise_free(scripted_scenario("scene01", 7)));
  return w;
}

}  // namespace

TEST(PrCounts, PrecisionFixture) {
  // Ten accepted pairs, eight of them between keyframes of the same sign.
  std::vector<Keyframe> kfs;
  std::vector<MatchCandidate> cands;
  for (int i = 0; i < 10; ++i) {
    const std::string sign = "s" + std::to_string(i);
    kfs.push_back(text_keyframe("A", i, sign));
    kfs.push_back(text_keyframe("B", i, i < 8 ? sign : "other"));
    cands.push_back(candidate({"A", i}, {"B", i}, true));
  }
  const PrMetrics m = score_candidates(cands, kfs, Modality::kFused, Thresholds{});
  EXPECT_EQ(m.true_positives, 8u);
  EXPECT_EQ(m.false_positives, 2u);
  EXPECT_DOUBLE_EQ(*m.precision, 0.8);
  EXPECT_DOUBLE_EQ(*m.recall, 1.0);
}

TEST(PrCounts, RecallCountsRejectedTruePairs) {
  const std::vector<Keyframe> kfs{text_keyframe("A", 0, "x"), text_keyframe("B", 0, "x"),
                                  text_keyframe("B", 1, "x"), text_keyframe("B", 2, "y")};
  const std::vector<MatchCandidate> cands{candidate({"A", 0}, {"B", 0}, true),
                                          candidate({"A", 0}, {"B", 1}, false),
                                          candidate({"A", 0}, {"B", 2}, false)};
  const PrMetrics m = score_candidates(cands, kfs, Modality::kFused, Thresholds{});
  EXPECT_DOUBLE_EQ(*m.precision, 1.0);
  EXPECT_DOUBLE_EQ(*m.recall, 0.5);
  EXPECT_EQ(m.false_negatives, 1u);
}

TEST(PrCounts, ZeroDenominatorsUnset) {
  const PrMetrics none = pr_from_counts(Modality::kFused, {}, 0, 0, 0);
  EXPECT_FALSE(none.precision.has_value());
  EXPECT_FALSE(none.recall.has_value());
  const PrMetrics missed = pr_from_counts(Modality::kFused, {}, 0, 0, 3);
  EXPECT_FALSE(missed.precision.has_value());
  EXPECT_DOUBLE_EQ(*missed.recall, 0.0);
}

TEST(SameSign, NeedsTruthIds) {
  Keyframe a = text_keyframe("A", 0, "x");
  Keyframe b = text_keyframe("B", 0, "x");
  EXPECT_TRUE(same_sign(a, b));
  b.text_obs->sign_id_truth.reset();
  EXPECT_THROW(same_sign(a, b), std::invalid_argument);
  b.text_obs.reset();
  EXPECT_THROW(same_sign(a, b), std::invalid_argument);
}

TEST(Gating, PrecomputedScoresAgreeWithMatching) {
  const World& w = scene01();
  const Thresholds th;
  for (const Modality m : {Modality::kFused, Modality::kTextOnly, Modality::kWifiOnly}) {
    const MatchOptions opt{m, {}, 10.0};
    const std::vector<MatchCandidate> cands = match_all(w.keyframes, th, opt);
    const PrMetrics direct = score_candidates(cands, w.keyframes, m, th);
    const PrMetrics gated = evaluate_gate(label_pairs(w.keyframes, th, opt), m, th);
    EXPECT_EQ(direct, gated) << to_string(m);
    std::size_t accepted = 0;
    for (const auto& c : cands) accepted += c.accepted();
    EXPECT_EQ(direct.true_positives + direct.false_positives, accepted);
  }
}

TEST(Sweep, RowCountAndOrder) {
  const LabeledPairs data = label_pairs(scene01().keyframes, Thresholds{});
  const std::vector<double> alphas{0.5, 1.0};
  const std::vector<double> bgs{0.3, 0.6, 0.9};
  const auto rows = threshold_sweep(data, alphas, bgs);
  ASSERT_EQ(rows.size(), alphas.size() + bgs.size() + alphas.size() * bgs.size());
  EXPECT_EQ(rows[0].modality, Modality::kTextOnly);
  EXPECT_EQ(rows[0].thresholds.beta, 0.0);
  EXPECT_EQ(rows[2].modality, Modality::kWifiOnly);
  EXPECT_EQ(rows[2].thresholds.alpha, 0.0);
  EXPECT_EQ(rows[2].thresholds.beta, rows[2].thresholds.gamma);
  for (std::size_t i = 5; i < rows.size(); ++i) EXPECT_EQ(rows[i].modality, Modality::kFused);
  for (const PrMetrics& r : rows) EXPECT_EQ(r, evaluate_gate(data, r.modality, r.thresholds));
  EXPECT_THROW(threshold_sweep(data, std::vector<double>{}, bgs), std::invalid_argument);
  EXPECT_THROW(threshold_sweep(data, alphas, std::vector<double>{}), std::invalid_argument);
}

TEST(Sweep, StricterTextThresholdNeverRaisesRecall) {
  const LabeledPairs data = label_pairs(scene01().keyframes, Thresholds{});
  const std::vector<double> alphas{0.0, 0.5, 0.8, 1.0};
  const std::vector<double> bgs{0.8};
  const auto rows = threshold_sweep(data, alphas, bgs);
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    EXPECT_LE(*rows[i].recall, *rows[i - 1].recall);
    EXPECT_LE(rows[i].true_positives + rows[i].false_positives,
              rows[i - 1].true_positives + rows[i - 1].false_positives);
  }
  EXPECT_DOUBLE_EQ(*rows[0].recall, 1.0);
}

TEST(Gating, FusedAcceptsSubsetOfTextOnly) {
  const World& w = scene01_noise_free();
  ASSERT_FALSE(w.scenario.plan.duplicate_texts().empty());
  const LabeledPairs data = label_pairs(w.keyframes, Thresholds{});
  for (const double a : {0.5, 0.8, 1.0}) {
    for (const double bg : {0.5, 0.8, 1.0}) {
      for (std::size_t k = 0; k < data.pairs.size(); ++k) {
        if (gate_scores(data.scores[k], {a, bg, bg, 30.0}, Modality::kFused) != Verdict::kAccepted)
          continue;
        ASSERT_EQ(gate_scores(data.scores[k], {a, 0.0, 0.0, 30.0}, Modality::kTextOnly),
                  Verdict::kAccepted);
        ASSERT_EQ(gate_scores(data.scores[k], {0.0, bg, bg, 30.0}, Modality::kWifiOnly),
                  Verdict::kAccepted);
      }
    }
  }
}

TEST(EndPointError, DiagonalFixture) {
  FloorPlan plan;
  plan.anchors = {{"start", {0, 0}, "A"}, {"end", {0, 0}, "B"}};
  const std::vector<Keyframe> kfs{text_keyframe("A", 0, "x", {0, 0, 0}),
                                  text_keyframe("A", 1, "x", {4, 0, 0}),
                                  text_keyframe("B", 0, "x", {0.1, 0, 0})};
  const std::map<KeyframeRef, Pose2> est{{{"A", 0}, {0, 0, 0}},
                                         {{"A", 1}, {4, 0, 0}},
                                         {{"B", 0}, {1, 1, 0}}};
  const EpeReport r = end_point_error(est, kfs, plan, epe_anchor_pair(plan), 12.0);
  EXPECT_DOUBLE_EQ(r.estimated_separation_m, std::sqrt(2.0));
  EXPECT_EQ(r.keyframe_a, (KeyframeRef{"A", 0}));
  EXPECT_EQ(r.keyframe_b, (KeyframeRef{"B", 0}));
  EXPECT_EQ(r.travel_distance_m, 12.0);
}

TEST(EndPointError, FailuresReported) {
  FloorPlan plan;
  plan.anchors = {{"start", {0, 0}, "A"}, {"end", {9, 9}, "B"}};
  const std::vector<Keyframe> kfs{text_keyframe("A", 0, "x", {0, 0, 0}),
                                  text_keyframe("B", 0, "x", {0, 0, 0})};
  const std::map<KeyframeRef, Pose2> est{{{"A", 0}, {}}, {{"B", 0}, {}}};
  EXPECT_THROW(end_point_error(est, kfs, plan, {"start", "end"}, 0.0), std::runtime_error);
  EXPECT_THROW(end_point_error(est, kfs, plan, {"start", "nowhere"}, 0.0), std::runtime_error);
  plan.anchors[1].position = {0, 0};
  EXPECT_THROW(end_point_error({{{"A", 0}, {}}}, kfs, plan, {"start", "end"}, 0.0),
               std::runtime_error);
  plan.anchors.pop_back();
  EXPECT_THROW(epe_anchor_pair(plan), std::runtime_error);
}

TEST(EndPointError, TruthPosesGiveZero) {
  const World& w = scene01_noise_free();
  AlignmentSummary truth;
  for (const Keyframe& k : w.keyframes) {
    truth.poses[k.ref()] = *k.truth_pose;
    truth.component_of[k.ref()] = 0;
  }
  const auto anchors = epe_anchor_pair(w.scenario.plan);
  EXPECT_EQ(alignment_epe(truth, w.keyframes, w.scenario.plan, anchors), 0.0);
  // Separate components give no end-point error.
  for (auto& [ref, c] : truth.component_of) c = ref.agent_id == "A" ? 0 : 1;
  EXPECT_FALSE(alignment_epe(truth, w.keyframes, w.scenario.plan, anchors).has_value());
}

TEST(EvaluateRun, RowsAndDeadReckoning) {
  const World& w = scene01();
  PipelineOptions opt;
  const AlignmentResult fused = run_alignment(w.keyframes, match_all(w.keyframes, opt.thresholds));
  const MetricsReport rep =
      evaluate_run("scene01", w.scenario.plan, w.recordings, w.keyframes, summarize(fused), opt, false);
  ASSERT_EQ(rep.location_recognition.size(), 3u);
  EXPECT_EQ(rep.location_recognition[0].modality, Modality::kTextOnly);
  EXPECT_EQ(rep.location_recognition[1].modality, Modality::kWifiOnly);
  EXPECT_EQ(rep.location_recognition[2].modality, Modality::kFused);
  ASSERT_EQ(rep.end_point_error.size(), 4u);
  const EpeRow* base = rep.epe("no_loop_closure");
  ASSERT_NE(base, nullptr);
  ASSERT_TRUE(base->epe_m.has_value());
  EXPECT_EQ(base->loop_edges, 0u);
  EXPECT_NEAR(rep.travel_distance_m, total_travel_distance(w.recordings), 1e-12);
  EXPECT_GT(rep.travel_distance_m, 250.0);
  ASSERT_NE(rep.epe("fused"), nullptr);
  EXPECT_LT(*rep.epe("fused")->epe_m, *base->epe_m);
  const MetricsReport swept =
      evaluate_run("scene01", w.scenario.plan, w.recordings, w.keyframes, summarize(fused), opt, true);
  EXPECT_EQ(swept.location_recognition.size(), 15u);
}

TEST(EndPointError, StationaryAgentsAtAnchorsGiveExactlyZero) {
  Scenario sc = make_noise_free(scripted_scenario("scene01", 7));
  const Vec2 anchor = sc.plan.anchors[0].position;
  for (AgentScript& s : sc.scripts) s.waypoints = {{anchor, 20.0, std::nullopt}};
  const World w = make_world(sc);
  std::map<std::string, Pose2> starts;
  for (const Recording& r : w.recordings) starts[r.agent_id] = *first_truth_pose(r);
  const auto est = dead_reckoning(w.keyframes, starts);
  const EpeReport r = end_point_error(est, w.keyframes, sc.plan, epe_anchor_pair(sc.plan),
                                      total_travel_distance(w.recordings));
  EXPECT_EQ(r.estimated_separation_m, 0.0);
  EXPECT_EQ(r.travel_distance_m, 0.0);
}
