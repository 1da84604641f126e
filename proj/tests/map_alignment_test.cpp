#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "cslam/floorplan.hpp"
#include "cslam/map_alignment.hpp"
#include "cslam/simulator.hpp"

using namespace cslam;

namespace {

Keyframe keyframe(const std::string& agent, int id, double t, const Pose2& odom,
                  std::vector<Vec2> scan = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}) {
  Keyframe k;
  k.agent_id = agent;
  k.keyframe_id = id;
  k.timestamp = t;
  k.odom_pose = odom;
  k.scan.points = std::move(scan);
  return k;
}

MatchCandidate accepted(KeyframeRef a, KeyframeRef b) {
  MatchCandidate c;
  c.a = std::move(a);
  c.b = std::move(b);
  c.verdict = Verdict::kAccepted;
  return c;
}

IcpResult converged_at(const Pose2& t, double mse) {
  IcpResult r;
  r.transform = t;
  r.mean_sq_error = mse;
  r.converged = true;
  return r;
}

FloorPlan two_rooms() {
  CorridorTemplate tpl;
  tpl.rooms = 2;
  return generate_floorplan(tpl, 0, 2, 3);
}

std::vector<Vec2> noisy_scan(const FloorPlan& plan, const Pose2& pose, double sigma,
                             std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  std::vector<Vec2> pts = simulate_scan(plan, pose, SensorModel{});
  for (Vec2& p : pts) p = p * (1.0 + n(rng) / p.norm());
  return pts;
}

}  // namespace

TEST(BuildPoseGraph, SingleAgentChainEqualsOdometry) {
  const std::vector<Keyframe> kfs{keyframe("A", 0, 0, {0, 0, 0}), keyframe("A", 1, 1, {1, 0, 0.1}),
                                  keyframe("A", 2, 2, {2, 0.2, 0.3})};
  const PoseGraphBuild b = build_pose_graph(kfs, {}, {});
  EXPECT_EQ(b.graph.nodes.size(), 3u);
  EXPECT_EQ(b.graph.edges.size(), 2u);
  EXPECT_EQ(b.graph.loop_edge_count(), 0u);
  const OptimizationResult r = optimize_pose_graph(b.graph);
  for (std::size_t i = 0; i < kfs.size(); ++i) {
    EXPECT_NEAR(r.poses[i].x, kfs[i].odom_pose.x, 1e-12);
    EXPECT_NEAR(r.poses[i].y, kfs[i].odom_pose.y, 1e-12);
    EXPECT_NEAR(r.poses[i].theta, kfs[i].odom_pose.theta, 1e-12);
  }
}

TEST(BuildPoseGraph, InterAgentEdgeConnectsAndPlacesSecondAgent) {
  const std::vector<Keyframe> kfs{keyframe("A", 0, 0, {0, 0, 0}), keyframe("A", 1, 1, {5, 0, 0}),
                                  keyframe("B", 0, 0, {0, 0, 0}), keyframe("B", 1, 1, {0, 3, 0})};
  const std::vector<MatchCandidate> cands{accepted({"A", 1}, {"B", 1})};
  const std::vector<std::optional<IcpResult>> icp{converged_at({0.5, 0, 0.2}, 1e-4)};
  const PoseGraphBuild b = build_pose_graph(kfs, cands, icp);
  EXPECT_EQ(b.graph.components().size(), 1u);
  ASSERT_EQ(b.graph.loop_edge_count(), 1u);
  const PoseGraphEdge& loop = b.graph.edges.back();
  EXPECT_EQ(loop.kind, EdgeKind::kLoop);
  EXPECT_EQ(loop.candidate_index, std::optional<std::size_t>{0});
  EXPECT_DOUBLE_EQ(loop.weight, 1e4);
  // B's keyframe 1 is initialised exactly where the loop edge puts it.
  const Pose2 expected = compose(Pose2{5, 0, 0}, Pose2{0.5, 0, 0.2});
  const Pose2 got = b.graph.estimates[*b.graph.find({"B", 1})];
  EXPECT_NEAR(got.x, expected.x, 1e-12);
  EXPECT_NEAR(got.y, expected.y, 1e-12);
  EXPECT_NEAR(got.theta, expected.theta, 1e-12);
  EXPECT_TRUE(b.warnings.empty());
}

TEST(BuildPoseGraph, NonConvergedMatchDroppedWithWarning) {
  const std::vector<Keyframe> kfs{keyframe("A", 0, 0, {}), keyframe("B", 0, 0, {})};
  const std::vector<MatchCandidate> cands{accepted({"A", 0}, {"B", 0})};
  IcpResult failed;
  const std::vector<std::optional<IcpResult>> icp{failed};
  const PoseGraphBuild b = build_pose_graph(kfs, cands, icp);
  EXPECT_EQ(b.dropped_matches, 1u);
  EXPECT_EQ(b.graph.loop_edge_count(), 0u);
  EXPECT_EQ(b.graph.components().size(), 2u);
  EXPECT_EQ(b.warnings.size(), 2u);
}

TEST(BuildPoseGraph, IcpSlotCountChecked) {
  const std::vector<Keyframe> kfs{keyframe("A", 0, 0, {})};
  const std::vector<MatchCandidate> cands{accepted({"A", 0}, {"A", 0})};
  EXPECT_THROW(build_pose_graph(kfs, cands, {}), std::invalid_argument);
}

TEST(MergeMaps, SingleKeyframeAtIdentity) {
  const std::vector<Keyframe> kfs{keyframe("A", 0, 0, {})};
  const PointCloud2 m = merge_maps({{{"A", 0}, Pose2::identity()}}, kfs, 0.0);
  EXPECT_EQ(m.points, kfs[0].scan.points);
}

TEST(MergeMaps, ZeroCellConcatenatesAndVoxelThins) {
  const std::vector<Keyframe> kfs{keyframe("A", 0, 0, {}), keyframe("A", 1, 1, {})};
  const std::map<KeyframeRef, Pose2> poses{{{"A", 0}, {0, 0, 0}}, {{"A", 1}, {0.01, 0, 0}}};
  EXPECT_EQ(merge_maps(poses, kfs, 0.0).points.size(), 8u);
  const PointCloud2 thin = merge_maps(poses, kfs, 0.5);
  EXPECT_EQ(thin.points.size(), 4u);
}

TEST(RunAlignment, NoMatchesKeepsFramesSeparate) {
  const std::vector<Keyframe> kfs{keyframe("A", 0, 0, {}), keyframe("A", 1, 1, {1, 0, 0}),
                                  keyframe("B", 0, 0, {})};
  const AlignmentResult r = run_alignment(kfs, std::vector<MatchCandidate>{});
  EXPECT_EQ(r.component_count, 2u);
  EXPECT_EQ(r.component_of.at({"A", 1}), 0u);
  EXPECT_EQ(r.component_of.at({"B", 0}), 1u);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(RunAlignment, MergedWallThinAfterAlignment) {
  const FloorPlan plan = two_rooms();
  std::mt19937_64 rng(81);
  const double sigma = 0.01;
  const Pose2 truth_a{5.0, 8.5, std::numbers::pi / 2};
  const Pose2 truth_b{5.25, 8.3, std::numbers::pi / 2 + 0.06};
  // A's frame is the world frame; B's odometry lives in an unrelated frame.
  const Pose2 b_frame{-3.0, 4.0, 1.1};
  const std::vector<Keyframe> kfs{
      keyframe("A", 0, 0, truth_a, noisy_scan(plan, truth_a, sigma, rng)),
      keyframe("B", 0, 0, compose(inverse(b_frame), truth_b), noisy_scan(plan, truth_b, sigma, rng))};
  const AlignmentResult r = run_alignment(kfs, std::vector{accepted({"A", 0}, {"B", 0})});
  ASSERT_EQ(r.component_count, 1u);
  const Pose2 b_est = r.poses.at({"B", 0});
  EXPECT_NEAR(b_est.x, truth_b.x, 0.02);
  EXPECT_NEAR(b_est.y, truth_b.y, 0.02);

  // Back wall of room 0 at y = corridor + depth.
  const double wall_y = 3.0 + 8.0;
  double sq = 0.0;
  int n = 0;
  for (const Vec2& p : r.merged_map.points) {
    if (std::abs(p.y - wall_y) < 0.3 && p.x > 1.0 && p.x < 9.0) {
      sq += (p.y - wall_y) * (p.y - wall_y);
      ++n;
    }
  }
  ASSERT_GT(n, 40);
  EXPECT_LT(std::sqrt(sq / n), 3.0 * sigma);
}

TEST(DeadReckoning, ComposesStartPose) {
  const std::vector<Keyframe> kfs{keyframe("A", 0, 0, {1, 0, 0}), keyframe("B", 0, 0, {1, 0, 0})};
  const auto poses = dead_reckoning(kfs, {{"A", {0, 0, std::numbers::pi / 2}}});
  EXPECT_NEAR(poses.at({"A", 0}).y, 1.0, 1e-12);
  EXPECT_NEAR(poses.at({"B", 0}).x, 1.0, 1e-12);
}
