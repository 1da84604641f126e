#include "cslam/icp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cslam {

Pose2 svd_rigid_fit(std::span<const PointPair> pairs) {
  if (pairs.size() < 2) {
    throw std::invalid_argument("svd_rigid_fit: need at least two pairs");
  }
  Eigen::Vector2d src_mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d dst_mean = Eigen::Vector2d::Zero();
  for (const PointPair& p : pairs) {
    src_mean += Eigen::Vector2d(p.source.x, p.source.y);
    dst_mean += Eigen::Vector2d(p.target.x, p.target.y);
  }
  const double n = static_cast<double>(pairs.size());
  src_mean /= n;
  dst_mean /= n;

  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  double spread = 0.0;
  for (const PointPair& p : pairs) {
    const Eigen::Vector2d s = Eigen::Vector2d(p.source.x, p.source.y) - src_mean;
    const Eigen::Vector2d d = Eigen::Vector2d(p.target.x, p.target.y) - dst_mean;
    cov += s * d.transpose();
    spread += s.squaredNorm();
  }
  if (spread <= 1e-18 * std::max(1.0, src_mean.squaredNorm())) {
    throw std::invalid_argument("svd_rigid_fit: source points are coincident");
  }

  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2d reflect = Eigen::Matrix2d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) {
    reflect(1, 1) = -1.0;
  }
  const Eigen::Matrix2d rot = svd.matrixV() * reflect * svd.matrixU().transpose();
  const Eigen::Vector2d t = dst_mean - rot * src_mean;
  return {t.x(), t.y(), std::atan2(rot(1, 0), rot(0, 0))};
}

PointGrid::PointGrid(std::span<const Vec2> points, double cell_size)
    : points_(points), cell_(cell_size) {
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("PointGrid: cell size must be positive");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto ix = static_cast<long long>(std::floor(points[i].x / cell_));
    const auto iy = static_cast<long long>(std::floor(points[i].y / cell_));
    cells_[key(ix, iy)].push_back(i);
  }
}

long PointGrid::nearest(const Vec2& q, double radius, double* sq_distance) const {
  const auto cx = static_cast<long long>(std::floor(q.x / cell_));
  const auto cy = static_cast<long long>(std::floor(q.y / cell_));
  double best = radius * radius;
  long best_index = -1;
  for (long long dx = -1; dx <= 1; ++dx) {
    for (long long dy = -1; dy <= 1; ++dy) {
      const auto it = cells_.find(key(cx + dx, cy + dy));
      if (it == cells_.end()) continue;
      for (std::size_t i : it->second) {
        const double ex = points_[i].x - q.x;
        const double ey = points_[i].y - q.y;
        const double d2 = ex * ex + ey * ey;
        // Ties go to the lower index so results do not depend on hash order.
        if (d2 < best || (d2 == best && best_index >= 0 && static_cast<long>(i) < best_index)) {
          best = d2;
          best_index = static_cast<long>(i);
        }
      }
    }
  }
  if (sq_distance != nullptr) *sq_distance = best;
  return best_index;
}

namespace {

struct Correspondences {
  std::vector<PointPair> pairs;
  double sq_error = 0.0;
};

Correspondences associate(const std::vector<Vec2>& source, const Pose2& pose,
                          const std::vector<Vec2>& target, const PointGrid& grid,
                          double radius) {
  Correspondences c;
  c.pairs.reserve(source.size());
  for (const Vec2& s : source) {
    const Vec2 moved = pose.apply(s);
    double d2 = 0.0;
    const long j = grid.nearest(moved, radius, &d2);
    if (j >= 0) {
      c.pairs.push_back({s, target[static_cast<std::size_t>(j)]});
      c.sq_error += d2;
    }
  }
  return c;
}

}  // namespace

IcpResult icp_register(const PointCloud2& source, const PointCloud2& target,
                       const Pose2& initial, const IcpOptions& options) {
  if (source.points.size() < 3 || target.points.size() < 3) {
    throw std::invalid_argument("icp_register: clouds need at least three points");
  }
  const PointGrid grid(target.points, options.correspondence_radius);
  IcpResult result;
  result.transform = initial;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;
    const Correspondences c = associate(source.points, result.transform, target.points, grid,
                                        options.correspondence_radius);
    if (c.pairs.size() < 3) {
      result.converged = false;
      result.diagnostic = "no correspondences within radius";
      result.inlier_fraction =
          static_cast<double>(c.pairs.size()) / static_cast<double>(source.points.size());
      result.mean_sq_error = c.pairs.empty() ? std::numeric_limits<double>::infinity()
                                             : c.sq_error / static_cast<double>(c.pairs.size());
      return result;
    }
    Pose2 next;
    try {
      next = svd_rigid_fit(c.pairs);
    } catch (const std::invalid_argument& e) {
      result.converged = false;
      result.diagnostic = e.what();
      return result;
    }
    const Pose2 step = between(result.transform, next);
    result.transform = next;
    if (std::hypot(step.x, step.y) < options.tolerance &&
        std::abs(step.theta) < options.tolerance) {
      result.converged = true;
      break;
    }
  }

  const Correspondences final_c = associate(source.points, result.transform, target.points,
                                            grid, options.correspondence_radius);
  result.inlier_fraction =
      static_cast<double>(final_c.pairs.size()) / static_cast<double>(source.points.size());
  if (final_c.pairs.empty()) {
    result.converged = false;
    result.diagnostic = "no correspondences within radius";
    result.mean_sq_error = std::numeric_limits<double>::infinity();
  } else {
    result.mean_sq_error = final_c.sq_error / static_cast<double>(final_c.pairs.size());
  }
  if (!result.converged && result.diagnostic.empty()) {
    result.diagnostic = "iteration cap reached";
  }
  return result;
}

}  // namespace cslam
