#include "cslam/pose_graph.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cslam {

std::size_t PoseGraph::add_node(const KeyframeRef& key, const Pose2& estimate) {
  const auto [it, inserted] = index.emplace(key, nodes.size());
  if (!inserted) {
    throw std::invalid_argument("PoseGraph: duplicate node " + to_string(key));
  }
  nodes.push_back(key);
  estimates.push_back(estimate);
  return it->second;
}

std::optional<std::size_t> PoseGraph::find(const KeyframeRef& key) const {
  const auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t PoseGraph::loop_edge_count() const {
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(), [](const PoseGraphEdge& e) { return e.kind == EdgeKind::kLoop; }));
}

std::vector<std::vector<std::size_t>> PoseGraph::components() const {
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find_root = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const PoseGraphEdge& e : edges) {
    const std::size_t a = find_root(e.from);
    const std::size_t b = find_root(e.to);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    groups[find_root(i)].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::array<double, 3> edge_residual(const PoseGraphEdge& edge, std::span<const Pose2> poses) {
  const Pose2& xi = poses[edge.from];
  const Pose2& xj = poses[edge.to];
  const Pose2& z = edge.measurement;
  const double ci = std::cos(xi.theta), si = std::sin(xi.theta);
  const double cz = std::cos(z.theta), sz = std::sin(z.theta);
  const double dx = xj.x - xi.x, dy = xj.y - xi.y;
  // Relative translation in frame i, then in the measurement frame.
  const double lx = ci * dx + si * dy - z.x;
  const double ly = -si * dx + ci * dy - z.y;
  return {cz * lx + sz * ly, -sz * lx + cz * ly,
          normalize_angle(xj.theta - xi.theta - z.theta)};
}

namespace {

double huber(double s, double scale) {
  if (scale <= 0.0 || s <= scale) return s * s;
  return 2.0 * scale * s - scale * scale;
}

// IRLS weight multiplier so that w * mult * s^2 matches the kernel's local curvature.
double huber_multiplier(double s, double scale) {
  if (scale <= 0.0 || s <= scale) return 1.0;
  return scale / s;
}

double norm3(const std::array<double, 3>& r) {
  return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

}  // namespace

double graph_objective(const PoseGraph& graph, std::span<const Pose2> poses,
                       double robust_kernel_scale) {
  double total = 0.0;
  for (const PoseGraphEdge& e : graph.edges) {
    total += e.weight * huber(norm3(edge_residual(e, poses)), robust_kernel_scale);
  }
  return total;
}

OptimizationResult optimize_pose_graph(const PoseGraph& graph, const OptimizerOptions& options) {
  OptimizationResult result;
  result.poses = graph.estimates;
  const double kernel = options.robust_kernel_scale;
  result.objective_history.push_back(graph_objective(graph, result.poses, kernel));
  if (graph.nodes.empty()) {
    result.converged = true;
    return result;
  }

  // Variable layout: every non-gauge node gets three consecutive columns.
  std::vector<long> column(graph.nodes.size(), -1);
  long n_vars = 0;
  for (const auto& component : graph.components()) {
    result.gauge_nodes.push_back(component.front());
    for (std::size_t k = 1; k < component.size(); ++k) {
      column[component[k]] = n_vars;
      n_vars += 3;
    }
  }
  if (n_vars == 0 || graph.edges.empty()) {
    result.converged = true;
    return result;
  }

  double lambda = 0.0;
  for (int iter = 0; iter < options.max_outer_iterations; ++iter) {
    const double current = result.objective_history.back();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(graph.edges.size() * 36);
    Eigen::VectorXd gradient = Eigen::VectorXd::Zero(n_vars);

    for (const PoseGraphEdge& e : graph.edges) {
      const std::array<double, 3> r = edge_residual(e, result.poses);
      const double w = e.weight * huber_multiplier(norm3(r), kernel);
      const Pose2& xi = result.poses[e.from];
      const Pose2& xj = result.poses[e.to];
      const double ci = std::cos(xi.theta), si = std::sin(xi.theta);
      const double cz = std::cos(e.measurement.theta), sz = std::sin(e.measurement.theta);
      const double dx = xj.x - xi.x, dy = xj.y - xi.y;
      // A = Rz^T Ri^T
      Eigen::Matrix2d rz_t;
      rz_t << cz, sz, -sz, cz;
      Eigen::Matrix2d ri_t;
      ri_t << ci, si, -si, ci;
      Eigen::Matrix2d dri_t;
      dri_t << -si, ci, -ci, -si;
      const Eigen::Matrix2d a = rz_t * ri_t;
      const Eigen::Vector2d dtheta_i = rz_t * dri_t * Eigen::Vector2d(dx, dy);

      Eigen::Matrix3d ji = Eigen::Matrix3d::Zero();
      Eigen::Matrix3d jj = Eigen::Matrix3d::Zero();
      ji.block<2, 2>(0, 0) = -a;
      ji.block<2, 1>(0, 2) = dtheta_i;
      ji(2, 2) = -1.0;
      jj.block<2, 2>(0, 0) = a;
      jj(2, 2) = 1.0;
      const Eigen::Vector3d res(r[0], r[1], r[2]);

      const std::array<std::pair<long, const Eigen::Matrix3d*>, 2> blocks{
          {{column[e.from], &ji}, {column[e.to], &jj}}};
      for (const auto& [ca, ja] : blocks) {
        if (ca < 0) continue;
        gradient.segment<3>(ca) += w * ja->transpose() * res;
        for (const auto& [cb, jb] : blocks) {
          if (cb < 0) continue;
          const Eigen::Matrix3d h = w * ja->transpose() * (*jb);
          for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) {
              triplets.emplace_back(ca + p, cb + q, h(p, q));
            }
          }
        }
      }
    }

    Eigen::SparseMatrix<double> hessian(n_vars, n_vars);
    hessian.setFromTriplets(triplets.begin(), triplets.end());
    const Eigen::VectorXd diag = hessian.diagonal();

    bool accepted = false;
    double best = current;
    std::vector<Pose2> best_poses;
    double step_norm = 0.0;
    for (int attempt = 0; attempt < 6 && !accepted; ++attempt) {
      Eigen::SparseMatrix<double> damped = hessian;
      for (long k = 0; k < n_vars; ++k) {
        damped.coeffRef(k, k) += lambda * diag(k) + 1e-12;
      }
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(damped);
      if (solver.info() != Eigen::Success) {
        lambda = std::max(1e-6, lambda * 10.0);
        continue;
      }
      const Eigen::VectorXd delta = solver.solve(-gradient);
      if (solver.info() != Eigen::Success || !delta.allFinite()) {
        lambda = std::max(1e-6, lambda * 10.0);
        continue;
      }
      step_norm = delta.lpNorm<Eigen::Infinity>();
      double alpha = 1.0;
      for (int ls = 0; ls < 12; ++ls, alpha *= 0.5) {
        std::vector<Pose2> trial = result.poses;
        for (std::size_t i = 0; i < trial.size(); ++i) {
          const long c = column[i];
          if (c < 0) continue;
          trial[i] = Pose2(trial[i].x + alpha * delta(c), trial[i].y + alpha * delta(c + 1),
                           trial[i].theta + alpha * delta(c + 2));
        }
        const double value = graph_objective(graph, trial, kernel);
        if (value <= current) {
          best = value;
          best_poses = std::move(trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        lambda = std::max(1e-6, lambda * 10.0);
      }
    }

    if (!accepted) {
      result.converged = true;  // no descent direction left
      break;
    }
    result.poses = std::move(best_poses);
    result.objective_history.push_back(best);
    result.iterations = iter + 1;
    lambda *= 0.1;
    if (lambda < 1e-9) lambda = 0.0;
    if (current - best <= 1e-12 * (1.0 + current) || step_norm < 1e-10) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace cslam
