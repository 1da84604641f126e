#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cslam/floorplan.hpp"
#include "cslam/geometry.hpp"
#include "cslam/recording.hpp"
#include "cslam/text_similarity.hpp"

namespace cslam {

struct Waypoint {
  Vec2 position;
  double hold_s = 0.0;
  // Heading to turn to on arrival. Waypoints with a facing are reading
  // stops: the simulator perturbs them by the viewpoint jitter.
  std::optional<double> facing_rad;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct SensorRates {
  double scan_hz = 5.0;
  double wifi_hz = 2.0;

  friend bool operator==(const SensorRates&, const SensorRates&) = default;
};

struct SensorNoise {
  double odom_sigma_trans_per_m = 0.01;
  double odom_sigma_rot_per_rad = 0.01;
  // Constant heading bias added to every odometry step.
  double heading_drift_rad_per_s = 0.0;
  double scan_range_sigma_m = 0.01;
  // Added in quadrature to each access point's own noise.
  double wifi_sigma_db = 0.0;
  OcrCorruption ocr;
  double text_detection_probability = 0.9;
  double viewpoint_jitter_m = 0.15;
  double viewpoint_jitter_rad = 0.035;

  friend bool operator==(const SensorNoise&, const SensorNoise&) = default;
};

struct SensorModel {
  int scan_rays = 360;
  double scan_max_range_m = 15.0;
  double text_range_m = 3.0;
  // Half-width of both the camera field of view and the sign readability cone.
  double text_half_angle_rad = 1.0471975511965976;
  double wifi_sensitivity_dbm = -85.0;

  friend bool operator==(const SensorModel&, const SensorModel&) = default;
};

struct AgentScript {
  std::string agent_id;
  std::vector<Waypoint> waypoints;
  double speed_mps = 1.0;
  double turn_rate_rad_s = 1.0;
  SensorRates rates;
  SensorNoise noise;
  SensorModel sensors;
  std::uint64_t seed = 0;

  friend bool operator==(const AgentScript&, const AgentScript&) = default;
};

// Piecewise motion through the waypoints: turn in place, drive straight,
// turn to the requested facing, hold.
struct TrajectoryLeg {
  enum class Kind { kRotate, kTranslate, kHold };
  Kind kind = Kind::kHold;
  double t0 = 0.0;
  double t1 = 0.0;
  Pose2 start;
  Pose2 end;
  // Hold at a waypoint with a requested facing; the camera reads once here.
  bool reading_stop = false;
};

struct Trajectory {
  std::vector<TrajectoryLeg> legs;
  double duration() const { return legs.empty() ? 0.0 : legs.back().t1; }
  Pose2 pose_at(double t) const;
};

// Throws std::invalid_argument on an empty script, a waypoint outside the
// plan, or non-positive speeds. Applies the viewpoint jitter.
Trajectory plan_trajectory(const FloorPlan& plan, const AgentScript& script);

// Scan endpoints in the sensor frame for a sensor at `pose`.
std::vector<Vec2> simulate_scan(const FloorPlan& plan, const Pose2& pose,
                                const SensorModel& sensors);

// The nearest sign readable from `pose`, if any.
const Sign* visible_sign(const FloorPlan& plan, const Pose2& pose, const SensorModel& sensors);

// Deterministic in (plan, script). Every random draw comes from streams
// seeded by script.seed.
Recording simulate_recording(const FloorPlan& plan, const AgentScript& script);

}  // namespace cslam
