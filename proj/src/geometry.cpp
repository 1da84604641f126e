#include "cslam/geometry.hpp"

#include <stdexcept>

namespace cslam {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("normalize_angle: non-finite angle");
  }
  if (theta > -kPi && theta <= kPi) {
    return theta;
  }
  double wrapped = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (wrapped <= -kPi) {
    wrapped += kTwoPi;
  }
  return wrapped;
}

Pose2::Pose2(double x_, double y_, double theta_)
    : x(x_), y(y_), theta(normalize_angle(theta_)) {}

Vec2 Pose2::apply(const Vec2& p) const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {x + c * p.x - s * p.y, y + s * p.x + c * p.y};
}

Pose2 compose(const Pose2& a, const Pose2& b) {
  const Vec2 t = a.apply(b.translation());
  return {t.x, t.y, a.theta + b.theta};
}

Pose2 inverse(const Pose2& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {-(c * p.x + s * p.y), -(-s * p.x + c * p.y), -p.theta};
}

Pose2 between(const Pose2& from, const Pose2& to) {
  const double c = std::cos(from.theta);
  const double s = std::sin(from.theta);
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  return {c * dx + s * dy, -s * dx + c * dy, to.theta - from.theta};
}

std::vector<Vec2> transform_points(const Pose2& pose, std::span<const Vec2> points) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const Vec2& p : points) {
    out.push_back({pose.x + c * p.x - s * p.y, pose.y + s * p.x + c * p.y});
  }
  return out;
}

PointCloud2 transform_cloud(const Pose2& pose, const PointCloud2& cloud) {
  return {transform_points(pose, cloud.points), cloud.frame_id};
}

bool segments_intersect(const Segment& s, const Segment& t) {
  const Vec2 r = s.b - s.a;
  const Vec2 q = t.b - t.a;
  const double d1 = r.cross(t.a - s.a);
  const double d2 = r.cross(t.b - s.a);
  const double d3 = q.cross(s.a - t.a);
  const double d4 = q.cross(s.b - t.a);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](const Vec2& p, const Vec2& a, const Vec2& b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
  };
  if (d1 == 0 && on_segment(t.a, s.a, s.b)) return true;
  if (d2 == 0 && on_segment(t.b, s.a, s.b)) return true;
  if (d3 == 0 && on_segment(s.a, t.a, t.b)) return true;
  if (d4 == 0 && on_segment(s.b, t.a, t.b)) return true;
  return false;
}

bool ray_segment_hit(const Vec2& origin, const Vec2& dir, const Segment& seg,
                     double& range) {
  const Vec2 e = seg.b - seg.a;
  const double denom = dir.cross(e);
  if (std::abs(denom) < 1e-12) {
    return false;
  }
  const Vec2 w = seg.a - origin;
  const double s = w.cross(e) / denom;
  const double u = w.cross(dir) / denom;
  if (s <= 0.0 || u < 0.0 || u > 1.0) {
    return false;
  }
  range = s;
  return true;
}

}  // namespace cslam
