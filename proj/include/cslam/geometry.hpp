#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace cslam {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Wraps an angle into (-pi, pi]. Throws std::invalid_argument on NaN/inf.
double normalize_angle(double theta);

// Planar rigid pose. theta is kept in (-pi, pi] by every operation that
// produces a Pose2.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2() = default;
  Pose2(double x_, double y_, double theta_);

  static Pose2 identity() { return {}; }

  Vec2 translation() const { return {x, y}; }

  // Applies the pose to a point expressed in its local frame.
  Vec2 apply(const Vec2& p) const;

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

// a * b: applies b, then a.
Pose2 compose(const Pose2& a, const Pose2& b);
Pose2 inverse(const Pose2& p);
// Pose of `to` expressed in the frame of `from`: inverse(from) * to.
Pose2 between(const Pose2& from, const Pose2& to);

struct PointCloud2 {
  std::vector<Vec2> points;
  std::string frame_id;

  // Fewer than three points; unusable for registration.
  bool degenerate() const { return points.size() < 3; }

  friend bool operator==(const PointCloud2&, const PointCloud2&) = default;
};

PointCloud2 transform_cloud(const Pose2& pose, const PointCloud2& cloud);
std::vector<Vec2> transform_points(const Pose2& pose, std::span<const Vec2> points);

struct Segment {
  Vec2 a;
  Vec2 b;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// Proper intersection test for two closed segments (touching counts).
bool segments_intersect(const Segment& s, const Segment& t);

// Distance along the ray origin + s * dir (dir unit) to the segment, if hit.
bool ray_segment_hit(const Vec2& origin, const Vec2& dir, const Segment& seg,
                     double& range);

}  // namespace cslam
