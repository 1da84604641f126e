#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cslam/geometry.hpp"
#include "cslam/wifi.hpp"

namespace cslam {

// Relative motion since the previous odometry event, in the previous body frame.
struct OdomEvent {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
  friend bool operator==(const OdomEvent&, const OdomEvent&) = default;
};

// Points in the sensor frame.
struct ScanEvent {
  std::vector<Vec2> points;
  friend bool operator==(const ScanEvent&, const ScanEvent&) = default;
};

struct TextEvent {
  std::string text;
  std::optional<std::string> sign_id;
  friend bool operator==(const TextEvent&, const TextEvent&) = default;
};

struct WifiEvent {
  std::vector<WifiReading> readings;
  friend bool operator==(const WifiEvent&, const WifiEvent&) = default;
};

struct TruthEvent {
  Pose2 pose;
  friend bool operator==(const TruthEvent&, const TruthEvent&) = default;
};

using EventPayload = std::variant<TruthEvent, OdomEvent, ScanEvent, WifiEvent, TextEvent>;

struct Event {
  double t = 0.0;
  EventPayload payload;
  friend bool operator==(const Event&, const Event&) = default;
};

// Events are ordered by time; within one timestamp the payload order is
// truth, odom, scan, wifi, text (the variant index).
struct Recording {
  std::string agent_id;
  std::vector<Event> events;
  friend bool operator==(const Recording&, const Recording&) = default;
};

// Sum of distances between consecutive ground-truth poses.
double truth_travel_distance(const Recording& recording);

std::optional<Pose2> first_truth_pose(const Recording& recording);

}  // namespace cslam
