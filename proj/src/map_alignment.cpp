#include "cslam/map_alignment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cslam {

std::vector<std::optional<IcpResult>> register_matches(
    std::span<const Keyframe> keyframes, std::span<const MatchCandidate> candidates,
    const IcpOptions& options) {
  std::map<KeyframeRef, const Keyframe*> by_ref;
  for (const Keyframe& kf : keyframes) by_ref.emplace(kf.ref(), &kf);

  std::vector<std::optional<IcpResult>> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const MatchCandidate& c = candidates[i];
    if (!c.accepted()) continue;
    const auto ia = by_ref.find(c.a);
    const auto ib = by_ref.find(c.b);
    if (ia == by_ref.end() || ib == by_ref.end()) {
      throw std::invalid_argument("register_matches: candidate references unknown keyframe");
    }
    const PointCloud2& target = ia->second->scan;
    const PointCloud2& source = ib->second->scan;
    if (source.degenerate() || target.degenerate()) {
      IcpResult failed;
      failed.diagnostic = "degenerate scan";
      out[i] = failed;
      continue;
    }
    out[i] = icp_register(source, target, Pose2::identity(), options);
  }
  return out;
}

namespace {

double odometry_variance(const Keyframe& a, const Keyframe& b, const Pose2& rel,
                         const OdometryNoiseModel& m) {
  const double len = std::abs(b.odom_distance - a.odom_distance);
  const double dt = std::abs(b.timestamp - a.timestamp);
  const double st = m.sigma_trans_per_m * len;
  const double sr = m.sigma_rot_per_rad * std::abs(rel.theta);
  const double sh = m.sigma_heading_per_s * dt;
  return st * st + sr * sr + sh * sh + m.variance_floor;
}

}  // namespace

PoseGraphBuild build_pose_graph(std::span<const Keyframe> keyframes,
                                std::span<const MatchCandidate> candidates,
                                std::span<const std::optional<IcpResult>> icp_results,
                                const AlignmentOptions& options) {
  if (icp_results.size() != candidates.size()) {
    throw std::invalid_argument("build_pose_graph: one ICP slot per candidate required");
  }
  PoseGraphBuild out;

  // Keyframes grouped by agent, each ordered by id.
  std::map<std::string, std::vector<const Keyframe*>> agents;
  for (const Keyframe& kf : keyframes) agents[kf.agent_id].push_back(&kf);
  for (auto& [id, list] : agents) {
    std::sort(list.begin(), list.end(),
              [](const Keyframe* x, const Keyframe* y) { return x->keyframe_id < y->keyframe_id; });
  }
  std::map<KeyframeRef, const Keyframe*> by_ref;
  for (const Keyframe& kf : keyframes) by_ref.emplace(kf.ref(), &kf);

  struct LoopEdge {
    std::size_t candidate;
    KeyframeRef a;
    KeyframeRef b;
    Pose2 z;
    double weight;
  };
  std::vector<LoopEdge> loops;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const MatchCandidate& c = candidates[i];
    if (!c.accepted()) continue;
    if (!icp_results[i] || !icp_results[i]->converged) {
      ++out.dropped_matches;
      out.warnings.push_back("dropped match " + to_string(c.a) + " <-> " + to_string(c.b) +
                             ": ICP did not converge");
      continue;
    }
    if (!by_ref.contains(c.a) || !by_ref.contains(c.b)) {
      throw std::invalid_argument("build_pose_graph: candidate references unknown keyframe");
    }
    const IcpResult& r = *icp_results[i];
    loops.push_back({i, c.a, c.b, r.transform,
                     1.0 / std::max(r.mean_sq_error, options.icp_mse_floor)});
  }

  // Frame of each agent relative to the root agent of its cluster. The first
  // agent roots the global frame; agents unreachable from it root their own.
  std::map<std::string, Pose2> frame;
  std::set<std::string> unreachable;
  for (const auto& [root, unused] : agents) {
    if (frame.contains(root)) continue;
    if (!frame.empty()) unreachable.insert(root);
    frame[root] = Pose2::identity();
    bool grew = true;
    while (grew) {
      grew = false;
      for (const LoopEdge& e : loops) {
        const bool has_a = frame.contains(e.a.agent_id);
        const bool has_b = frame.contains(e.b.agent_id);
        if (has_a == has_b) continue;
        const Pose2& oa = by_ref.at(e.a)->odom_pose;
        const Pose2& ob = by_ref.at(e.b)->odom_pose;
        if (has_a) {
          frame[e.b.agent_id] =
              compose(compose(compose(frame[e.a.agent_id], oa), e.z), inverse(ob));
          if (unreachable.contains(e.a.agent_id)) unreachable.insert(e.b.agent_id);
        } else {
          frame[e.a.agent_id] =
              compose(compose(compose(frame[e.b.agent_id], ob), inverse(e.z)), inverse(oa));
          if (unreachable.contains(e.b.agent_id)) unreachable.insert(e.a.agent_id);
        }
        grew = true;
      }
    }
  }

  for (const auto& [id, list] : agents) {
    if (unreachable.contains(id)) {
      out.warnings.push_back("agent " + id +
                             " shares no verified location with the first agent; "
                             "its map stays in its own frame");
    }
    const Pose2 offset = frame.at(id);
    for (const Keyframe* kf : list) {
      out.graph.add_node(kf->ref(), compose(offset, kf->odom_pose));
    }
    for (std::size_t k = 1; k < list.size(); ++k) {
      const Keyframe& a = *list[k - 1];
      const Keyframe& b = *list[k];
      PoseGraphEdge edge;
      edge.from = *out.graph.find(a.ref());
      edge.to = *out.graph.find(b.ref());
      edge.measurement = between(a.odom_pose, b.odom_pose);
      edge.weight = 1.0 / odometry_variance(a, b, edge.measurement, options.odometry);
      edge.kind = EdgeKind::kOdometry;
      out.graph.edges.push_back(edge);
    }
  }

  for (const LoopEdge& e : loops) {
    PoseGraphEdge edge;
    edge.from = *out.graph.find(e.a);
    edge.to = *out.graph.find(e.b);
    edge.measurement = e.z;
    edge.weight = e.weight;
    edge.kind = EdgeKind::kLoop;
    edge.candidate_index = e.candidate;
    out.graph.edges.push_back(edge);
  }
  return out;
}

PointCloud2 merge_maps(const std::map<KeyframeRef, Pose2>& poses,
                       std::span<const Keyframe> keyframes, double voxel_size) {
  PointCloud2 merged;
  merged.frame_id = "global";
  for (const Keyframe& kf : keyframes) {
    const auto it = poses.find(kf.ref());
    if (it == poses.end()) continue;
    const std::vector<Vec2> moved = transform_points(it->second, kf.scan.points);
    merged.points.insert(merged.points.end(), moved.begin(), moved.end());
  }
  if (voxel_size <= 0.0) {
    return merged;
  }
  struct Accum {
    double sx = 0.0;
    double sy = 0.0;
    std::size_t n = 0;
  };
  std::map<std::pair<long long, long long>, Accum> voxels;
  for (const Vec2& p : merged.points) {
    const auto key = std::make_pair(static_cast<long long>(std::floor(p.x / voxel_size)),
                                    static_cast<long long>(std::floor(p.y / voxel_size)));
    Accum& a = voxels[key];
    a.sx += p.x;
    a.sy += p.y;
    ++a.n;
  }
  merged.points.clear();
  for (const auto& [key, a] : voxels) {
    merged.points.push_back({a.sx / static_cast<double>(a.n), a.sy / static_cast<double>(a.n)});
  }
  return merged;
}

AlignmentResult run_alignment(std::span<const Keyframe> keyframes,
                              std::span<const MatchCandidate> candidates,
                              const AlignmentOptions& options) {
  AlignmentResult result;
  const auto icp = register_matches(keyframes, candidates, options.icp);
  result.build = build_pose_graph(keyframes, candidates, icp, options);
  result.warnings = result.build.warnings;
  if (result.build.graph.loop_edge_count() == 0 && !keyframes.empty()) {
    result.warnings.push_back("no verified matches; per-agent maps stay in their own frames");
  }
  result.optimization = optimize_pose_graph(result.build.graph, options.optimizer);
  if (!result.optimization.converged) {
    result.warnings.push_back("pose graph optimisation hit the iteration cap");
  }
  const PoseGraph& g = result.build.graph;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    result.poses.emplace(g.nodes[i], result.optimization.poses[i]);
  }
  const auto components = g.components();
  result.component_count = components.size();
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (std::size_t node : components[c]) result.component_of.emplace(g.nodes[node], c);
  }
  result.merged_map = merge_maps(result.poses, keyframes, options.voxel_size);
  return result;
}

std::map<KeyframeRef, Pose2> dead_reckoning(std::span<const Keyframe> keyframes,
                                            const std::map<std::string, Pose2>& start_poses) {
  std::map<KeyframeRef, Pose2> out;
  for (const Keyframe& kf : keyframes) {
    const auto it = start_poses.find(kf.agent_id);
    const Pose2 start = it == start_poses.end() ? Pose2::identity() : it->second;
    out.emplace(kf.ref(), compose(start, kf.odom_pose));
  }
  return out;
}

}  // namespace cslam
