#include "cslam/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cslam {

bool FloorPlan::contains(const Vec2& p) const {
  return p.x >= bounds_min.x && p.x <= bounds_max.x && p.y >= bounds_min.y &&
         p.y <= bounds_max.y;
}

std::size_t FloorPlan::walls_crossed(const Vec2& a, const Vec2& b) const {
  std::size_t n = 0;
  const Segment path{a, b};
  for (const Segment& w : walls) {
    if (segments_intersect(path, w)) ++n;
  }
  return n;
}

const Sign* FloorPlan::find_sign(const std::string& sign_id) const {
  for (const Sign& s : signs) {
    if (s.sign_id == sign_id) return &s;
  }
  return nullptr;
}

const Anchor* FloorPlan::find_anchor(const std::string& label) const {
  for (const Anchor& a : anchors) {
    if (a.label == label) return &a;
  }
  return nullptr;
}

std::vector<std::string> FloorPlan::duplicate_texts() const {
  std::map<std::string, int> counts;
  for (const Sign& s : signs) ++counts[s.text];
  std::vector<std::string> out;
  for (const auto& [text, n] : counts) {
    if (n >= 2) out.push_back(text);
  }
  return out;
}

Pose2 reading_pose(const Sign& sign, double reading_distance_m) {
  const Vec2 normal{std::cos(sign.facing_rad), std::sin(sign.facing_rad)};
  const Vec2 p = sign.position + normal * reading_distance_m;
  return {p.x, p.y, sign.facing_rad + std::numbers::pi};
}

CorridorLayout corridor_layout(const CorridorTemplate& tpl) {
  if (tpl.rooms < 1) {
    throw std::invalid_argument("corridor template needs at least one room");
  }
  if (tpl.room_width_m < 2.0 * tpl.door_width_m + 2.0 || tpl.room_depth_m < 4.0 ||
      tpl.corridor_width_m < 2.0) {
    throw std::invalid_argument("corridor template rooms are too small for signs");
  }
  CorridorLayout out;
  out.corridor_width_m = tpl.corridor_width_m;
  const int north = tpl.rooms_both_sides ? (tpl.rooms + 1) / 2 : tpl.rooms;
  const int south = tpl.rooms - north;
  out.length_m = std::max(north, south) * tpl.room_width_m;
  const double w = tpl.corridor_width_m;
  const double margin = 2.0;

  int index = 0;
  for (int side = 0; side < 2; ++side) {
    const int count = side == 0 ? north : south;
    for (int k = 0; k < count; ++k) {
      RoomLayout r;
      r.index = index++;
      r.north = side == 0;
      r.x0 = k * tpl.room_width_m;
      r.x1 = r.x0 + tpl.room_width_m;
      const double cx = 0.5 * (r.x0 + r.x1);
      r.outside = {cx, 0.5 * w};
      r.inside = r.north ? Vec2{cx, w + 1.5} : Vec2{cx, -1.5};
      const double back = r.north ? w + tpl.room_depth_m : -tpl.room_depth_m;
      for (double x = r.x0 + margin; x <= r.x1 - margin + 1e-9; x += tpl.sign_spacing_m) {
        r.back_wall_slots.push_back({x, back});
      }
      if (r.back_wall_slots.empty()) {
        throw std::invalid_argument("corridor template rooms are too small for signs");
      }
      out.rooms.push_back(r);
    }
  }
  return out;
}

namespace {

const std::vector<std::string>& duplicate_pool() {
  static const std::vector<std::string> pool = {
      "FIRE HOSE CABINET", "EMERGENCY EXIT",   "NO SMOKING",         "FIRST AID KIT",
      "ELECTRICAL PANEL",  "AUTHORIZED STAFF", "KEEP DOOR CLOSED",   "HAND WASH STATION",
      "RECYCLING POINT",   "LOST AND FOUND",   "MEETING POINT",      "WET FLOOR"};
  return pool;
}

std::string mac_for(std::uint64_t seed, int index) {
  char buf[18];
  std::snprintf(buf, sizeof buf, "02:%02x:%02x:%02x:%02x:%02x",
                static_cast<unsigned>((seed >> 16) & 0xff), static_cast<unsigned>((seed >> 8) & 0xff),
                static_cast<unsigned>(seed & 0xff), static_cast<unsigned>((index >> 8) & 0xff),
                static_cast<unsigned>(index & 0xff));
  return buf;
}

}  // namespace

FloorPlan generate_floorplan(const CorridorTemplate& tpl, int duplicate_text_count,
                             int ap_count, std::uint64_t seed) {
  if (duplicate_text_count < 0 || ap_count < 0) {
    throw std::invalid_argument("generate_floorplan: counts must be non-negative");
  }
  if (duplicate_text_count > static_cast<int>(duplicate_pool().size())) {
    throw std::invalid_argument("generate_floorplan: too many duplicate texts requested");
  }
  const CorridorLayout layout = corridor_layout(tpl);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  FloorPlan plan;
  const double w = tpl.corridor_width_m;
  const double d = tpl.room_depth_m;
  const double len = layout.length_m;
  const bool has_south = std::any_of(layout.rooms.begin(), layout.rooms.end(),
                                     [](const RoomLayout& r) { return !r.north; });
  const double y_min = has_south ? -d : 0.0;
  const double y_max = w + d;
  plan.bounds_min = {0.0, y_min};
  plan.bounds_max = {len, y_max};
  plan.room_count = layout.rooms.size();

  // Outer shell.
  plan.walls.push_back({{0.0, y_min}, {len, y_min}});
  plan.walls.push_back({{len, y_min}, {len, y_max}});
  plan.walls.push_back({{len, y_max}, {0.0, y_max}});
  plan.walls.push_back({{0.0, y_max}, {0.0, y_min}});

  // Corridor walls with door gaps, partition walls and one fixed piece of
  // furniture per room (identical in every room).
  for (int side = 0; side < 2; ++side) {
    const bool north = side == 0;
    const double y = north ? w : 0.0;
    std::vector<const RoomLayout*> rooms;
    for (const RoomLayout& r : layout.rooms) {
      if (r.north == north) rooms.push_back(&r);
    }
    if (rooms.empty()) continue;
    double x = 0.0;
    for (const RoomLayout* r : rooms) {
      const double cx = r->outside.x;
      plan.walls.push_back({{x, y}, {cx - 0.5 * tpl.door_width_m, y}});
      x = cx + 0.5 * tpl.door_width_m;
    }
    plan.walls.push_back({{x, y}, {len, y}});
    const double far = north ? w + d : -d;
    for (const RoomLayout* r : rooms) {
      if (r->x1 < len - 1e-9) plan.walls.push_back({{r->x1, y}, {r->x1, far}});
      const double dir = north ? 1.0 : -1.0;
      const Vec2 c0{r->x0 + 1.0, y + dir * (d - 4.0)};
      const Vec2 c1{r->x0 + 2.2, y + dir * (d - 3.4)};
      plan.furniture.push_back({{c0.x, c0.y}, {c1.x, c0.y}});
      plan.furniture.push_back({{c1.x, c0.y}, {c1.x, c1.y}});
      plan.furniture.push_back({{c1.x, c1.y}, {c0.x, c1.y}});
      plan.furniture.push_back({{c0.x, c1.y}, {c0.x, c0.y}});
    }
  }

  // Signs.
  int sign_counter = 0;
  auto add_sign = [&](const std::string& text, Vec2 pos, double facing) {
    plan.signs.push_back({"s" + std::to_string(sign_counter++), text, pos, facing});
  };
  for (const RoomLayout& r : layout.rooms) {
    char label[16];
    std::snprintf(label, sizeof label, "%02d", r.index + 1);
    // North door signs sit east of the door, south ones west, so facing
    // rooms never share a reading spot.
    const double offset = 0.5 * tpl.door_width_m + 1.0;
    const double x = r.north ? r.outside.x + offset : r.outside.x - offset;
    if (r.north) {
      add_sign(tpl.room_label_prefix + label, {x, w}, -std::numbers::pi / 2);
    } else {
      add_sign(tpl.room_label_prefix + label, {x, 0.0}, std::numbers::pi / 2);
    }
  }
  // Free back-wall slots per room (slot 0 is reserved for group 0).
  std::vector<std::vector<std::size_t>> free_slots(layout.rooms.size());
  for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
    for (std::size_t s = 1; s < layout.rooms[i].back_wall_slots.size(); ++s) {
      free_slots[i].push_back(s);
    }
  }
  auto back_facing = [](const RoomLayout& r) {
    return r.north ? -std::numbers::pi / 2 : std::numbers::pi / 2;
  };
  for (int g = 0; g < duplicate_text_count; ++g) {
    const std::string& text = duplicate_pool()[static_cast<std::size_t>(g)];
    if (g == 0) {
      if (layout.rooms.size() < 2) {
        throw std::invalid_argument("generate_floorplan: duplicates need two rooms");
      }
      for (const RoomLayout& r : layout.rooms) {
        add_sign(text, r.back_wall_slots[0], back_facing(r));
      }
    } else if (g == 1) {
      add_sign(text, {0.0, 0.5 * w}, 0.0);
      add_sign(text, {len, 0.5 * w}, std::numbers::pi);
    } else {
      std::vector<std::size_t> hosts;
      for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
        if (!free_slots[i].empty()) hosts.push_back(i);
      }
      if (hosts.size() < 2) {
        throw std::invalid_argument(
            "generate_floorplan: rooms too small for the requested duplicate texts");
      }
      std::shuffle(hosts.begin(), hosts.end(), rng);
      std::sort(hosts.begin(), hosts.begin() + 2);
      for (int k = 0; k < 2; ++k) {
        const std::size_t room = hosts[static_cast<std::size_t>(k)];
        const std::size_t slot = free_slots[room].front();
        free_slots[room].erase(free_slots[room].begin());
        add_sign(text, layout.rooms[room].back_wall_slots[slot], back_facing(layout.rooms[room]));
      }
    }
  }

  // Access points.
  const ApModel& m = tpl.ap_model;
  auto make_ap = [&](int index, Vec2 pos, bool in_room) {
    AccessPoint ap;
    ap.mac = mac_for(seed, index);
    ap.position = pos;
    ap.transmit_power_dbm = (in_room ? m.room_transmit_power_dbm : m.transmit_power_dbm) +
                          m.transmit_power_jitter_db * gauss(rng);
    ap.constant_k_db = m.constant_k_db;
    ap.path_loss_exponent = m.path_loss_exponent;
    ap.noise_sigma_db = m.noise_sigma_db;
    ap.wall_attenuation_db = in_room ? m.room_wall_attenuation_db : m.wall_attenuation_db;
    ap.mount_height_m = m.mount_height_m;
    return ap;
  };
  const int room_aps = std::min<int>(ap_count, static_cast<int>(layout.rooms.size()));
  int ap_index = 0;
  for (int i = 0; i < room_aps; ++i) {
    const RoomLayout& r = layout.rooms[static_cast<std::size_t>(i)];
    const double cy = r.north ? w + 0.5 * d : -0.5 * d;
    const Vec2 pos{0.5 * (r.x0 + r.x1) + m.position_jitter_m * gauss(rng),
                   cy + m.position_jitter_m * gauss(rng)};
    plan.aps.push_back(make_ap(ap_index++, pos, true));
  }
  const int corridor_count = ap_count - room_aps;
  for (int k = 0; k < corridor_count; ++k) {
    const double x = (k + 0.5) * len / corridor_count;
    const Vec2 pos{std::clamp(x + 0.5 * m.position_jitter_m * gauss(rng), 0.2, len - 0.2),
                   0.5 * w};
    plan.aps.push_back(make_ap(ap_index++, pos, false));
  }
  return plan;
}

}  // namespace cslam
