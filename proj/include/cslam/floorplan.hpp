#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cslam/geometry.hpp"
#include "cslam/wifi.hpp"

namespace cslam {

struct Sign {
  std::string sign_id;
  std::string text;
  // Point on the wall carrying the sign.
  Vec2 position;
  // Direction the sign face points to (outward normal of its wall).
  double facing_rad = 0.0;

  friend bool operator==(const Sign&, const Sign&) = default;
};

struct Anchor {
  std::string label;
  Vec2 position;
  // Agent whose keyframes are searched when resolving the anchor.
  std::string agent_id;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct FloorPlan {
  Vec2 bounds_min;
  Vec2 bounds_max;
  std::vector<Segment> walls;
  // Block scan rays and sight lines but not radio.
  std::vector<Segment> furniture;
  std::vector<Sign> signs;
  std::vector<AccessPoint> aps;
  std::vector<Anchor> anchors;
  std::size_t room_count = 0;

  bool contains(const Vec2& p) const;
  std::size_t walls_crossed(const Vec2& a, const Vec2& b) const;
  const Sign* find_sign(const std::string& sign_id) const;
  const Anchor* find_anchor(const std::string& label) const;
  // Texts carried by two or more signs, sorted.
  std::vector<std::string> duplicate_texts() const;

  friend bool operator==(const FloorPlan&, const FloorPlan&) = default;
};

// Radio parameters shared by the generated access points.
struct ApModel {
  double transmit_power_dbm = 20.0;
  double transmit_power_jitter_db = 1.0;
  double constant_k_db = 40.0;
  double path_loss_exponent = 3.0;
  double noise_sigma_db = 2.0;
  double wall_attenuation_db = 4.0;
  // Room APs sit behind heavier partitions so each room has its own visibility set.
  double room_transmit_power_dbm = 15.0;
  double room_wall_attenuation_db = 20.0;
  double mount_height_m = 2.5;
  double position_jitter_m = 0.5;
};

// A straight corridor along +x with identical rooms opening onto it.
struct CorridorTemplate {
  int rooms = 4;
  bool rooms_both_sides = false;
  double room_width_m = 10.0;
  double room_depth_m = 8.0;
  double corridor_width_m = 3.0;
  double door_width_m = 1.5;
  // Minimum spacing between signs sharing a wall.
  double sign_spacing_m = 3.0;
  // Distance from a sign to the spot a reader stands at.
  double reading_distance_m = 1.5;
  std::string room_label_prefix = "MEETING ROOM A-3";
  ApModel ap_model;
};

struct RoomLayout {
  int index = 0;
  bool north = true;
  double x0 = 0.0;
  double x1 = 0.0;
  // Corridor point in front of the door, and a point just inside the room.
  Vec2 outside;
  Vec2 inside;
  // Sign positions available on the back wall.
  std::vector<Vec2> back_wall_slots;
};

struct CorridorLayout {
  double length_m = 0.0;
  double corridor_width_m = 0.0;
  std::vector<RoomLayout> rooms;
};

// Throws std::invalid_argument when the rooms cannot hold a sign.
CorridorLayout corridor_layout(const CorridorTemplate& tpl);

// Signs: one room-number sign beside every door, then `duplicate_text_count`
// texts that each appear at two or more places (the first one in every room,
// the second at both corridor ends, the rest in two randomly chosen rooms).
// Access points: one per room, the rest spread along the corridor.
// Deterministic in all arguments. Throws std::invalid_argument when the
// layout cannot host the requested signs.
FloorPlan generate_floorplan(const CorridorTemplate& tpl, int duplicate_text_count,
                             int ap_count, std::uint64_t seed);

// Where a reader stands to read `sign`, facing it.
Pose2 reading_pose(const Sign& sign, double reading_distance_m);

}  // namespace cslam
