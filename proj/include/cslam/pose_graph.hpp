#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cslam/geometry.hpp"
#include "cslam/place_recognition.hpp"

namespace cslam {

enum class EdgeKind { kOdometry, kLoop };

// Relative-pose constraint: pose of `to` expressed in the frame of `from`.
struct PoseGraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Pose2 measurement;
  double weight = 1.0;
  EdgeKind kind = EdgeKind::kOdometry;
  // Loop edges point back at the accepted match they came from.
  std::optional<std::size_t> candidate_index;
};

struct PoseGraph {
  std::vector<KeyframeRef> nodes;
  std::vector<Pose2> estimates;
  std::vector<PoseGraphEdge> edges;
  std::map<KeyframeRef, std::size_t> index;

  std::size_t add_node(const KeyframeRef& key, const Pose2& estimate);
  std::optional<std::size_t> find(const KeyframeRef& key) const;
  std::size_t loop_edge_count() const;

  // Connected components over all edges, each sorted; ordered by first node.
  std::vector<std::vector<std::size_t>> components() const;
};

struct OptimizerOptions {
  int max_outer_iterations = 50;
  // Huber threshold on the residual norm; <= 0 disables the kernel.
  double robust_kernel_scale = 1.0;
};

struct OptimizationResult {
  std::vector<Pose2> poses;
  // Robust objective before the first and after every accepted iteration.
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
  // First node of each component, held fixed.
  std::vector<std::size_t> gauge_nodes;

  double final_objective() const { return objective_history.back(); }
};

// Residual of one edge: [translation error in the measurement frame, heading error].
std::array<double, 3> edge_residual(const PoseGraphEdge& edge, std::span<const Pose2> poses);

// sum_e w_e * huber(|r_e|), huber(s) = s^2 for s <= scale, 2*scale*s - scale^2 beyond.
double graph_objective(const PoseGraph& graph, std::span<const Pose2> poses,
                       double robust_kernel_scale);

// Iteratively reweighted Gauss-Newton starting from graph.estimates, with the
// first node of every component pinned. Steps are only accepted when the
// objective does not increase.
OptimizationResult optimize_pose_graph(const PoseGraph& graph,
                                       const OptimizerOptions& options = {});

}  // namespace cslam
