#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cslam/floorplan.hpp"
#include "cslam/geometry.hpp"
#include "cslam/icp.hpp"
#include "cslam/simulator.hpp"

namespace testworld {

// Scan from the middle of a two-room corridor; every ray returns a point.
inline cslam::PointCloud2 corridor_scan() {
  cslam::CorridorTemplate tpl;
  tpl.rooms = 2;
  const cslam::FloorPlan plan = cslam::generate_floorplan(tpl, 0, 2, 1);
  return {cslam::simulate_scan(plan, {9.0, 1.3, 0.2}, cslam::SensorModel{}), "corridor"};
}

inline double extent(const cslam::PointCloud2& c) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& p : c.points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return std::max(x1 - x0, y1 - y0);
}

// Each point moved along its ray by a relative range error.
inline cslam::PointCloud2 with_range_noise(const cslam::PointCloud2& c, double relative_sigma,
                                           std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, relative_sigma);
  cslam::PointCloud2 out = c;
  for (auto& p : out.points) p = p * (1.0 + n(rng));
  return out;
}

struct RecoveryTrial {
  cslam::Pose2 truth;
  cslam::Pose2 initial;
};

// |theta| <= 30 deg, |t| <= half the extent; the initial guess is the truth
// perturbed by up to 5 deg and 0.3 m.
inline RecoveryTrial random_trial(std::mt19937_64& rng, double cloud_extent) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const double r = 0.5 * cloud_extent * std::sqrt(unit(rng));
  const double phi = angle(rng);
  const cslam::Pose2 truth{r * std::cos(phi), r * std::sin(phi), 30.0 * kDeg * u(rng)};
  const double e = 0.3 * std::sqrt(unit(rng));
  const double psi = angle(rng);
  const cslam::Pose2 initial{truth.x + e * std::cos(psi), truth.y + e * std::sin(psi),
                             truth.theta + 5.0 * kDeg * u(rng)};
  return {truth, initial};
}

}  // namespace testworld
