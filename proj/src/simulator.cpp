#include "cslam/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cslam {

namespace {

enum Stream : std::uint64_t { kJitter = 1, kOdom, kScan, kWifi, kTextDetect, kTextCorrupt };

std::mt19937_64 stream_rng(std::uint64_t seed, Stream s) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s)};
  return std::mt19937_64(seq);
}

double bearing(const Vec2& from, const Vec2& to) {
  return std::atan2(to.y - from.y, to.x - from.x);
}

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string("agent script: ") + what + " must be >= 0");
}

void validate(const FloorPlan& plan, const AgentScript& script) {
  if (script.agent_id.empty() ||
      std::any_of(script.agent_id.begin(), script.agent_id.end(), [](unsigned char c) {
        return c == ':' || c == ',' || std::isspace(c) || c < 0x20;
      }))
    throw std::invalid_argument("agent id must be non-empty without ':', ',' or whitespace: '" +
                                script.agent_id + "'");
  if (script.waypoints.empty()) throw std::invalid_argument("agent script has no waypoints");
  if (!(script.speed_mps > 0.0) || !(script.turn_rate_rad_s > 0.0)) {
    throw std::invalid_argument("agent script: speed and turn rate must be > 0");
  }
  if (!(script.rates.scan_hz > 0.0) || !(script.rates.wifi_hz > 0.0)) {
    throw std::invalid_argument("agent script: sensor rates must be > 0");
  }
  if (script.sensors.scan_rays < 1) throw std::invalid_argument("agent script: scan_rays must be >= 1");
  const SensorNoise& n = script.noise;
  require_non_negative(n.odom_sigma_trans_per_m, "odometry translation sigma");
  require_non_negative(n.odom_sigma_rot_per_rad, "odometry rotation sigma");
  require_non_negative(n.scan_range_sigma_m, "scan sigma");
  require_non_negative(n.wifi_sigma_db, "wifi sigma");
  require_non_negative(n.viewpoint_jitter_m, "viewpoint jitter");
  require_non_negative(n.viewpoint_jitter_rad, "viewpoint jitter");
  if (!(n.text_detection_probability >= 0.0 && n.text_detection_probability <= 1.0)) {
    throw std::invalid_argument("agent script: detection probability must be in [0, 1]");
  }
  for (std::size_t i = 0; i < script.waypoints.size(); ++i) {
    const Waypoint& w = script.waypoints[i];
    require_non_negative(w.hold_s, "hold time");
    if (!plan.contains(w.position)) {
      throw std::invalid_argument("agent " + script.agent_id + ": waypoint " + std::to_string(i) +
                                  " lies outside the floor plan");
    }
  }
}

}  // namespace

Pose2 Trajectory::pose_at(double t) const {
  if (legs.empty()) throw std::logic_error("empty trajectory");
  auto it = std::upper_bound(legs.begin(), legs.end(), t,
                             [](double v, const TrajectoryLeg& l) { return v < l.t1; });
  if (it == legs.end()) return legs.back().end;
  const TrajectoryLeg& leg = *it;
  if (t <= leg.t0) return leg.start;
  const double f = (t - leg.t0) / (leg.t1 - leg.t0);
  switch (leg.kind) {
    case TrajectoryLeg::Kind::kHold:
      return leg.start;
    case TrajectoryLeg::Kind::kRotate: {
      const double sweep = normalize_angle(leg.end.theta - leg.start.theta);
      return {leg.start.x, leg.start.y, leg.start.theta + f * sweep};
    }
    case TrajectoryLeg::Kind::kTranslate:
      return {leg.start.x + f * (leg.end.x - leg.start.x), leg.start.y + f * (leg.end.y - leg.start.y),
              leg.start.theta};
  }
  return leg.start;
}

Trajectory plan_trajectory(const FloorPlan& plan, const AgentScript& script) {
  validate(plan, script);
  std::mt19937_64 rng = stream_rng(script.seed, kJitter);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Waypoint> wps = script.waypoints;
  for (Waypoint& w : wps) {
    if (!w.facing_rad) continue;
    const Vec2 jittered{w.position.x + script.noise.viewpoint_jitter_m * gauss(rng),
                        w.position.y + script.noise.viewpoint_jitter_m * gauss(rng)};
    const double facing = *w.facing_rad + script.noise.viewpoint_jitter_rad * gauss(rng);
    if (plan.contains(jittered)) w.position = jittered;
    w.facing_rad = facing;
  }

  Trajectory traj;
  double t = 0.0;
  double heading = wps.front().facing_rad.value_or(0.0);
  if (!wps.front().facing_rad) {
    for (std::size_t i = 1; i < wps.size(); ++i) {
      if (distance(wps[i].position, wps[0].position) > 1e-9) {
        heading = bearing(wps[0].position, wps[i].position);
        break;
      }
    }
  }
  Pose2 cur{wps.front().position.x, wps.front().position.y, heading};

  auto rotate_to = [&](double target) {
    const Pose2 end{cur.x, cur.y, target};
    const double sweep = std::abs(normalize_angle(end.theta - cur.theta));
    if (sweep < 1e-12) return;
    const double dt = sweep / script.turn_rate_rad_s;
    traj.legs.push_back({TrajectoryLeg::Kind::kRotate, t, t + dt, cur, end, false});
    t += dt;
    cur = end;
  };
  auto hold = [&](double dt, bool reading) {
    if (dt <= 0.0) return;
    traj.legs.push_back({TrajectoryLeg::Kind::kHold, t, t + dt, cur, cur, reading});
    t += dt;
  };

  hold(wps.front().hold_s, wps.front().facing_rad.has_value());
  for (std::size_t i = 1; i < wps.size(); ++i) {
    const Waypoint& w = wps[i];
    const Vec2 here{cur.x, cur.y};
    const double dist = distance(here, w.position);
    if (dist > 1e-9) {
      rotate_to(bearing(here, w.position));
      const Pose2 end{w.position.x, w.position.y, cur.theta};
      const double dt = dist / script.speed_mps;
      traj.legs.push_back({TrajectoryLeg::Kind::kTranslate, t, t + dt, cur, end, false});
      t += dt;
      cur = end;
    }
    if (w.facing_rad) rotate_to(*w.facing_rad);
    hold(w.hold_s, w.facing_rad.has_value());
  }
  if (traj.legs.empty()) traj.legs.push_back({TrajectoryLeg::Kind::kHold, 0.0, 0.0, cur, cur, false});
  return traj;
}

std::vector<Vec2> simulate_scan(const FloorPlan& plan, const Pose2& pose,
                                const SensorModel& sensors) {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(sensors.scan_rays));
  const Vec2 origin = pose.translation();
  for (int k = 0; k < sensors.scan_rays; ++k) {
    const double local = 2.0 * std::numbers::pi * k / sensors.scan_rays;
    const double a = pose.theta + local;
    const Vec2 dir{std::cos(a), std::sin(a)};
    double best = std::numeric_limits<double>::infinity();
    for (const auto* group : {&plan.walls, &plan.furniture}) {
      for (const Segment& w : *group) {
        double r = 0.0;
        if (ray_segment_hit(origin, dir, w, r) && r < best) best = r;
      }
    }
    if (best <= sensors.scan_max_range_m) {
      out.push_back({best * std::cos(local), best * std::sin(local)});
    }
  }
  return out;
}

const Sign* visible_sign(const FloorPlan& plan, const Pose2& pose, const SensorModel& sensors) {
  const Vec2 eye = pose.translation();
  const Vec2 look{std::cos(pose.theta), std::sin(pose.theta)};
  const double cos_limit = std::cos(sensors.text_half_angle_rad);
  const Sign* best = nullptr;
  double best_range = std::numeric_limits<double>::infinity();
  for (const Sign& s : plan.signs) {
    const Vec2 to_sign = s.position - eye;
    const double range = to_sign.norm();
    if (range > sensors.text_range_m || range < 1e-9 || range >= best_range) continue;
    const Vec2 u = to_sign * (1.0 / range);
    const Vec2 normal{std::cos(s.facing_rad), std::sin(s.facing_rad)};
    if (look.dot(u) < cos_limit) continue;
    if (normal.dot(u * -1.0) < cos_limit) continue;
    // Stop just in front of the wall carrying the sign.
    if (plan.walls_crossed(eye, s.position + normal * 0.05) != 0) continue;
    best = &s;
    best_range = range;
  }
  return best;
}

Recording simulate_recording(const FloorPlan& plan, const AgentScript& script) {
  const Trajectory traj = plan_trajectory(plan, script);
  const double duration = traj.duration();
  const SensorNoise& noise = script.noise;

  std::mt19937_64 odom_rng = stream_rng(script.seed, kOdom);
  std::mt19937_64 scan_rng = stream_rng(script.seed, kScan);
  std::mt19937_64 wifi_rng = stream_rng(script.seed, kWifi);
  std::mt19937_64 detect_rng = stream_rng(script.seed, kTextDetect);
  std::mt19937_64 corrupt_rng = stream_rng(script.seed, kTextCorrupt);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto ticks = [duration](double hz) {
    std::vector<double> out;
    const auto n = static_cast<long long>(std::floor(duration * hz + 1e-9));
    for (long long k = 0; k <= n; ++k) out.push_back(static_cast<double>(k) / hz);
    return out;
  };
  const std::vector<double> scan_times = ticks(script.rates.scan_hz);
  const std::vector<double> wifi_times = ticks(script.rates.wifi_hz);

  // One reading attempt per reading stop, at the scan tick nearest its midpoint.
  std::vector<double> text_times;
  for (const TrajectoryLeg& leg : traj.legs) {
    if (!leg.reading_stop || leg.t1 <= leg.t0) continue;
    const double mid = 0.5 * (leg.t0 + leg.t1);
    auto it = std::min_element(scan_times.begin(), scan_times.end(), [mid](double a, double b) {
      return std::abs(a - mid) < std::abs(b - mid);
    });
    if (it != scan_times.end() && *it >= leg.t0 && *it <= leg.t1) text_times.push_back(*it);
  }

  Recording rec;
  rec.agent_id = script.agent_id;
  std::vector<double> all = scan_times;
  all.insert(all.end(), wifi_times.begin(), wifi_times.end());
  std::sort(all.begin(), all.end());
  std::vector<double> times;
  for (double t : all) {
    if (times.empty() || t - times.back() > 1e-9) times.push_back(t);
  }
  const auto is_in = [](const std::vector<double>& v, double t) {
    auto it = std::lower_bound(v.begin(), v.end(), t - 1e-9);
    return it != v.end() && std::abs(*it - t) <= 1e-9;
  };

  std::optional<Pose2> last_scan_pose;
  double last_scan_t = 0.0;
  for (double t : times) {
    const Pose2 truth = traj.pose_at(t);
    rec.events.push_back({t, TruthEvent{truth}});
    if (is_in(scan_times, t)) {
      if (last_scan_pose) {
        const Pose2 d = between(*last_scan_pose, truth);
        const double len = std::hypot(d.x, d.y);
        const double dt = t - last_scan_t;
        OdomEvent o;
        o.dx = d.x + noise.odom_sigma_trans_per_m * len * gauss(odom_rng);
        o.dy = d.y + noise.odom_sigma_trans_per_m * len * gauss(odom_rng);
        o.dtheta = d.theta + noise.odom_sigma_rot_per_rad * std::abs(d.theta) * gauss(odom_rng) +
                   noise.heading_drift_rad_per_s * dt;
        rec.events.push_back({t, o});
      }
      last_scan_pose = truth;
      last_scan_t = t;

      ScanEvent scan;
      scan.points = simulate_scan(plan, truth, script.sensors);
      if (noise.scan_range_sigma_m > 0.0) {
        for (Vec2& p : scan.points) {
          const double r = p.norm();
          const double noisy = std::max(0.0, r + noise.scan_range_sigma_m * gauss(scan_rng));
          p = p * (noisy / r);
        }
      }
      rec.events.push_back({t, std::move(scan)});
    }
    if (is_in(wifi_times, t)) {
      WifiEvent w;
      const Vec2 rx = truth.translation();
      for (const AccessPoint& ap : plan.aps) {
        const double sigma = std::hypot(ap.noise_sigma_db, noise.wifi_sigma_db);
        double rss = predicted_rss(ap, rx, plan.walls_crossed(ap.position, rx)).rss_dbm;
        if (sigma > 0.0) rss += sigma * gauss(wifi_rng);
        rss = std::min(rss, 0.0);
        if (rss >= script.sensors.wifi_sensitivity_dbm) w.readings.push_back({ap.mac, rss});
      }
      rec.events.push_back({t, std::move(w)});
    }
    if (is_in(text_times, t)) {
      const Sign* sign = visible_sign(plan, truth, script.sensors);
      if (sign && unit(detect_rng) < noise.text_detection_probability) {
        std::string text = corrupt_text(sign->text, noise.ocr, corrupt_rng);
        if (!text.empty()) rec.events.push_back({t, TextEvent{std::move(text), sign->sign_id}});
      }
    }
  }
  return rec;
}

}  // namespace cslam
