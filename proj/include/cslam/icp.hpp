#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cslam/geometry.hpp"

namespace cslam {

struct PointPair {
  Vec2 source;
  Vec2 target;
};

// Closed-form least-squares rigid transform T minimising
// sum |target_i - T(source_i)|^2. Throws std::invalid_argument with fewer
// than two pairs or when all source points coincide.
Pose2 svd_rigid_fit(std::span<const PointPair> pairs);

// Uniform hash grid for fixed-radius nearest-neighbour queries.
class PointGrid {
 public:
  PointGrid(std::span<const Vec2> points, double cell_size);

  // Index of the nearest point within `radius` (radius <= cell size), or -1.
  long nearest(const Vec2& query, double radius, double* sq_distance = nullptr) const;

 private:
  static long long key(long long ix, long long iy) { return (ix << 32) ^ (iy & 0xffffffffLL); }

  std::span<const Vec2> points_;
  double cell_;
  std::unordered_map<long long, std::vector<std::size_t>> cells_;
};

struct IcpOptions {
  int max_iterations = 50;
  double correspondence_radius = 1.0;
  double tolerance = 1e-5;
};

struct IcpResult {
  // Maps source-frame points into the target frame.
  Pose2 transform;
  double mean_sq_error = 0.0;
  int iterations = 0;
  bool converged = false;
  double inlier_fraction = 0.0;
  std::string diagnostic;
};

// Point-to-point ICP. Throws std::invalid_argument if either cloud has fewer
// than three points.
IcpResult icp_register(const PointCloud2& source, const PointCloud2& target,
                       const Pose2& initial, const IcpOptions& options = {});

}  // namespace cslam
