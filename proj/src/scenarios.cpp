#include "cslam/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cslam {

namespace {

constexpr double kReadHoldS = 4.0;
constexpr double kEndHoldS = 1.0;
constexpr double kHeadingDrift = 1e-3;

// Builds waypoint lists over a corridor layout.
class Route {
 public:
  Route(const FloorPlan& plan, const CorridorTemplate& tpl)
      : plan_(plan), tpl_(tpl), layout_(corridor_layout(tpl)) {}

  Route& start(Vec2 p) {
    wps_.push_back({p, kEndHoldS, std::nullopt});
    return *this;
  }
  Route& go(Vec2 p) {
    wps_.push_back({p, 0.0, std::nullopt});
    return *this;
  }
  Route& finish(Vec2 p) {
    wps_.push_back({p, kEndHoldS, std::nullopt});
    return *this;
  }
  Route& read(const Sign& s) {
    const Pose2 p = reading_pose(s, tpl_.reading_distance_m);
    wps_.push_back({p.translation(), kReadHoldS, p.theta});
    return *this;
  }
  Route& read_end(bool east) {
    for (const Sign& s : plan_.signs) {
      const bool on_end = east ? s.position.x >= layout_.length_m - 1e-9 : s.position.x <= 1e-9;
      if (on_end) return read(s);
    }
    throw std::logic_error("scenario: no sign on the corridor end");
  }
  // Read the door sign, enter, read every back-wall sign, leave.
  Route& visit(int room) {
    const RoomLayout& r = layout_.rooms.at(static_cast<std::size_t>(room));
    const double door_y = r.north ? tpl_.corridor_width_m : 0.0;
    std::vector<const Sign*> back;
    const Sign* door = nullptr;
    for (const Sign& s : plan_.signs) {
      if (s.position.x < r.x0 || s.position.x > r.x1) continue;
      if (std::abs(s.position.y - door_y) < 1e-9) {
        door = &s;
      } else if (r.north ? s.position.y > door_y : s.position.y < door_y) {
        back.push_back(&s);
      }
    }
    std::sort(back.begin(), back.end(),
              [](const Sign* a, const Sign* b) { return a->position.x < b->position.x; });
    if (door) read(*door);
    go(r.outside).go(r.inside);
    for (const Sign* s : back) read(*s);
    go(r.inside).go(r.outside);
    return *this;
  }

  std::vector<Waypoint> take() { return std::move(wps_); }

 private:
  const FloorPlan& plan_;
  CorridorTemplate tpl_;
  CorridorLayout layout_;
  std::vector<Waypoint> wps_;
};

AgentScript base_script(const std::string& id, std::uint64_t seed, std::size_t index) {
  AgentScript s;
  s.agent_id = id;
  s.seed = seed * 16 + index + 1;
  s.rates.scan_hz = 2.0;
  s.rates.wifi_hz = 2.0;
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> scale(0.7, 1.3);
  const double sign = (rng() & 1U) ? 1.0 : -1.0;
  s.noise.heading_drift_rad_per_s = sign * kHeadingDrift * scale(rng);
  return s;
}

Scenario scene01(std::uint64_t seed) {
  CorridorTemplate tpl;
  Scenario sc;
  sc.name = "scene01";
  sc.seed = seed;
  sc.plan = generate_floorplan(tpl, 3, 9, seed);
  const Vec2 anchor{3.0, 1.5};
  sc.plan.anchors.push_back({"A_start", anchor, "A"});
  sc.plan.anchors.push_back({"C_end", anchor, "C"});

  Route a(sc.plan, tpl);
  a.start(anchor).read_end(false).visit(0).visit(1).visit(2).visit(3).read_end(true);
  Route b(sc.plan, tpl);
  b.start({36.0, 1.5}).read_end(true).visit(3).visit(2).visit(1).visit(0).read_end(false);
  Route c(sc.plan, tpl);
  c.start({25.0, 1.5}).visit(2).visit(3).visit(2).visit(1).visit(0).read_end(false).finish(anchor);

  Route* routes[] = {&a, &b, &c};
  const char* ids[] = {"A", "B", "C"};
  for (std::size_t i = 0; i < 3; ++i) {
    AgentScript s = base_script(ids[i], seed, i);
    s.waypoints = routes[i]->take();
    sc.scripts.push_back(std::move(s));
  }
  return sc;
}

Scenario scene02(std::uint64_t seed) {
  CorridorTemplate tpl;
  tpl.rooms = 6;
  tpl.rooms_both_sides = true;
  tpl.room_label_prefix = "ROOM B-2";
  Scenario sc;
  sc.name = "scene02";
  sc.seed = seed;
  sc.plan = generate_floorplan(tpl, 3, 10, seed);
  const Vec2 anchor{3.0, 1.5};
  sc.plan.anchors.push_back({"A_start", anchor, "A"});
  sc.plan.anchors.push_back({"C_end", anchor, "C"});

  Route a(sc.plan, tpl);
  a.start(anchor).visit(0).visit(3).visit(1).visit(0).visit(4).read_end(true);
  Route b(sc.plan, tpl);
  b.start({27.0, 1.5}).visit(2).visit(5).visit(1).visit(4).visit(2).read_end(false);
  Route c(sc.plan, tpl);
  c.start({15.0, 1.5}).visit(4).visit(1).visit(3).visit(4).visit(0).finish(anchor);

  Route* routes[] = {&a, &b, &c};
  const char* ids[] = {"A", "B", "C"};
  for (std::size_t i = 0; i < 3; ++i) {
    AgentScript s = base_script(ids[i], seed, i);
    s.waypoints = routes[i]->take();
    sc.scripts.push_back(std::move(s));
  }
  return sc;
}

Scenario aliasing(std::uint64_t seed) {
  CorridorTemplate tpl;
  Scenario sc;
  sc.name = "aliasing";
  sc.seed = seed;
  sc.plan = generate_floorplan(tpl, 0, 4, seed);
  const CorridorLayout layout = corridor_layout(tpl);
  for (int room : {0, 3}) {
    const RoomLayout& r = layout.rooms[static_cast<std::size_t>(room)];
    sc.plan.signs.push_back({"s" + std::to_string(sc.plan.signs.size()), "EMERGENCY EXIT",
                             r.back_wall_slots.front(), -std::numbers::pi / 2});
  }
  const Vec2 anchor{3.0, 1.5};
  sc.plan.anchors.push_back({"A_start", anchor, "A"});
  sc.plan.anchors.push_back({"B_end", anchor, "B"});

  Route a(sc.plan, tpl);
  a.start(anchor).visit(0).visit(3);
  Route b(sc.plan, tpl);
  b.start({36.0, 1.5}).visit(3).visit(0).finish(anchor);

  AgentScript sa = base_script("A", seed, 0);
  sa.waypoints = a.take();
  AgentScript sb = base_script("B", seed, 1);
  sb.waypoints = b.take();
  sc.scripts = {std::move(sa), std::move(sb)};
  return sc;
}

}  // namespace

std::vector<std::string> known_scenarios() { return {"aliasing", "scene01", "scene02"}; }

Scenario scripted_scenario(const std::string& name, std::uint64_t seed) {
  if (name == "scene01") return scene01(seed);
  if (name == "scene02") return scene02(seed);
  if (name == "aliasing") return aliasing(seed);
  std::string known;
  for (const std::string& n : known_scenarios()) known += (known.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown scenario '" + name + "' (known: " + known + ")");
}

Scenario make_noise_free(Scenario scenario) {
  for (AccessPoint& ap : scenario.plan.aps) ap.noise_sigma_db = 0.0;
  for (AgentScript& s : scenario.scripts) {
    SensorNoise& n = s.noise;
    n.odom_sigma_trans_per_m = 0.0;
    n.odom_sigma_rot_per_rad = 0.0;
    n.heading_drift_rad_per_s = 0.0;
    n.scan_range_sigma_m = 0.0;
    n.wifi_sigma_db = 0.0;
    n.ocr = {0.0, 0.0, 0.0};
    n.text_detection_probability = 1.0;
    n.viewpoint_jitter_m = 0.0;
    n.viewpoint_jitter_rad = 0.0;
  }
  return scenario;
}

Scenario make_texts_unique(Scenario scenario) {
  std::map<std::string, int> seen;
  for (Sign& s : scenario.plan.signs) {
    const int n = seen[s.text]++;
    if (n > 0) s.text += " " + std::string(1, static_cast<char>('A' + n));
  }
  return scenario;
}

}  // namespace cslam
