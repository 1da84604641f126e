#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cslam/icp.hpp"
#include "cslam/place_recognition.hpp"
#include "cslam/pose_graph.hpp"

namespace cslam {

// Assumed odometry uncertainty used to weight odometry edges.
struct OdometryNoiseModel {
  double sigma_trans_per_m = 0.02;
  double sigma_rot_per_rad = 0.02;
  double sigma_heading_per_s = 0.002;
  double variance_floor = 1e-6;
};

struct AlignmentOptions {
  IcpOptions icp;
  OptimizerOptions optimizer;
  OdometryNoiseModel odometry;
  double icp_mse_floor = 1e-6;
  // Voxel size for thinning the merged map; 0 keeps every point.
  double voxel_size = 0.0;
};

// One ICP per accepted candidate, in candidate order (nullopt for rejected
// ones). Source is b's scan, target a's scan, initial guess identity: the two
// keyframes are assumed co-located and facing the same sign. Degenerate scans
// yield a non-converged result.
std::vector<std::optional<IcpResult>> register_matches(
    std::span<const Keyframe> keyframes, std::span<const MatchCandidate> candidates,
    const IcpOptions& options = {});

struct PoseGraphBuild {
  PoseGraph graph;
  // Accepted matches whose ICP did not converge.
  std::size_t dropped_matches = 0;
  std::vector<std::string> warnings;
};

// Nodes: every keyframe. Odometry edges join consecutive keyframes of an
// agent; loop edges come from converged ICP results, weighted 1/max(mse, floor).
// Initial estimates chain each agent's odometry and place agents relative to
// each other through the first inter-agent edge reaching them.
PoseGraphBuild build_pose_graph(std::span<const Keyframe> keyframes,
                                std::span<const MatchCandidate> candidates,
                                std::span<const std::optional<IcpResult>> icp_results,
                                const AlignmentOptions& options = {});

// Every keyframe scan moved by its pose and concatenated in keyframe order,
// optionally thinned to one centroid per voxel.
PointCloud2 merge_maps(const std::map<KeyframeRef, Pose2>& poses,
                       std::span<const Keyframe> keyframes, double voxel_size = 0.0);

struct AlignmentResult {
  PoseGraphBuild build;
  OptimizationResult optimization;
  std::map<KeyframeRef, Pose2> poses;
  // Component index of each node (0 holds the first agent's first keyframe).
  std::map<KeyframeRef, std::size_t> component_of;
  std::size_t component_count = 0;
  PointCloud2 merged_map;
  std::vector<std::string> warnings;
};

AlignmentResult run_alignment(std::span<const Keyframe> keyframes,
                              std::span<const MatchCandidate> candidates,
                              const AlignmentOptions& options = {});

// Odometry-only estimate: each agent integrated from a known start pose.
std::map<KeyframeRef, Pose2> dead_reckoning(std::span<const Keyframe> keyframes,
                                            const std::map<std::string, Pose2>& start_poses);

}  // namespace cslam
