#include "cslam/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace cslam {

using Json = nlohmann::ordered_json;

namespace {

Json vec_json(const Vec2& v) { return Json::array({v.x, v.y}); }

Vec2 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

template <typename F>
auto parsing(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw FormatError(what + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(what + ": " + e.what());
  }
}

std::string ref_text(const KeyframeRef& r) { return to_string(r); }

KeyframeRef ref_from(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0) throw FormatError("bad keyframe reference '" + s + "'");
  KeyframeRef r;
  r.agent_id = s.substr(0, colon);
  const std::string num = s.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), r.keyframe_id);
  if (ec != std::errc() || ptr != num.data() + num.size()) {
    throw FormatError("bad keyframe reference '" + s + "'");
  }
  return r;
}

Json thresholds_json(const Thresholds& th) {
  return {{"alpha", th.alpha}, {"beta", th.beta}, {"gamma", th.gamma},
          {"min_loop_separation_s", th.min_loop_separation_s}};
}

Thresholds thresholds_from(const Json& j) {
  return {j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("gamma").get<double>(),
          j.at("min_loop_separation_s").get<double>()};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------- floorplan

std::string floorplan_to_text(const FloorPlan& plan) {
  Json j;
  j["format"] = "cslam.floorplan/1";
  j["bounds_min_m"] = vec_json(plan.bounds_min);
  j["bounds_max_m"] = vec_json(plan.bounds_max);
  j["room_count"] = plan.room_count;
  auto segs = [](const std::vector<Segment>& v) {
    Json a = Json::array();
    for (const Segment& s : v) a.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
    return a;
  };
  j["walls_m"] = segs(plan.walls);
  j["furniture_m"] = segs(plan.furniture);
  j["signs"] = Json::array();
  for (const Sign& s : plan.signs) {
    j["signs"].push_back({{"sign_id", s.sign_id}, {"text", s.text},
                          {"position_m", vec_json(s.position)}, {"facing_rad", s.facing_rad}});
  }
  j["access_points"] = Json::array();
  for (const AccessPoint& ap : plan.aps) {
    j["access_points"].push_back({{"mac", ap.mac},
                                  {"position_m", vec_json(ap.position)},
                                  {"mount_height_m", ap.mount_height_m},
                                  {"transmit_power_dbm", ap.transmit_power_dbm},
                                  {"constant_k_db", ap.constant_k_db},
                                  {"path_loss_exponent", ap.path_loss_exponent},
                                  {"noise_sigma_db", ap.noise_sigma_db},
                                  {"wall_attenuation_db", ap.wall_attenuation_db}});
  }
  j["anchors"] = Json::array();
  for (const Anchor& a : plan.anchors) {
    j["anchors"].push_back(
        {{"label", a.label}, {"position_m", vec_json(a.position)}, {"agent_id", a.agent_id}});
  }
  return j.dump(2) + "\n";
}

FloorPlan floorplan_from_text(const std::string& text) {
  return parsing("floorplan", [&] {
    const Json j = Json::parse(text);
    FloorPlan plan;
    plan.bounds_min = vec_from(j.at("bounds_min_m"));
    plan.bounds_max = vec_from(j.at("bounds_max_m"));
    plan.room_count = j.value("room_count", std::size_t{0});
    auto segs = [](const Json& a) {
      std::vector<Segment> v;
      for (const Json& s : a) {
        if (!s.is_array() || s.size() != 4) throw FormatError("floorplan: segment needs 4 numbers");
        v.push_back({{s[0].get<double>(), s[1].get<double>()}, {s[2].get<double>(), s[3].get<double>()}});
      }
      return v;
    };
    plan.walls = segs(j.at("walls_m"));
    if (j.contains("furniture_m")) plan.furniture = segs(j.at("furniture_m"));
    for (const Json& s : j.at("signs")) {
      plan.signs.push_back({s.at("sign_id").get<std::string>(), s.at("text").get<std::string>(),
                            vec_from(s.at("position_m")), s.at("facing_rad").get<double>()});
    }
    for (const Json& a : j.at("access_points")) {
      AccessPoint ap;
      ap.mac = a.at("mac").get<std::string>();
      ap.position = vec_from(a.at("position_m"));
      ap.mount_height_m = a.value("mount_height_m", 0.0);
      ap.transmit_power_dbm = a.at("transmit_power_dbm").get<double>();
      ap.constant_k_db = a.at("constant_k_db").get<double>();
      ap.path_loss_exponent = a.at("path_loss_exponent").get<double>();
      ap.noise_sigma_db = a.at("noise_sigma_db").get<double>();
      ap.wall_attenuation_db = a.at("wall_attenuation_db").get<double>();
      if (!(ap.path_loss_exponent > 0.0) || !(ap.noise_sigma_db >= 0.0)) {
        throw FormatError("floorplan: access point " + ap.mac +
                          " needs path_loss_exponent > 0 and noise_sigma_db >= 0");
      }
      plan.aps.push_back(ap);
    }
    for (const Json& a : j.at("anchors")) {
      plan.anchors.push_back({a.at("label").get<std::string>(), vec_from(a.at("position_m")),
                              a.at("agent_id").get<std::string>()});
    }
    for (const Sign& s : plan.signs) {
      if (!plan.contains(s.position)) throw FormatError("floorplan: sign " + s.sign_id + " lies outside the bounds");
    }
    for (const Anchor& a : plan.anchors) {
      if (!plan.contains(a.position)) throw FormatError("floorplan: anchor " + a.label + " lies outside the bounds");
    }
    return plan;
  });
}

// ------------------------------------------------------------------ scripts

std::string scripts_to_text(const std::vector<AgentScript>& scripts) {
  Json j;
  j["format"] = "cslam.scripts/1";
  j["agents"] = Json::array();
  for (const AgentScript& s : scripts) {
    Json a;
    a["agent_id"] = s.agent_id;
    a["seed"] = s.seed;
    a["speed_mps"] = s.speed_mps;
    a["turn_rate_rad_s"] = s.turn_rate_rad_s;
    a["scan_hz"] = s.rates.scan_hz;
    a["wifi_hz"] = s.rates.wifi_hz;
    const SensorNoise& n = s.noise;
    a["noise"] = {{"odom_sigma_trans_per_m", n.odom_sigma_trans_per_m},
                  {"odom_sigma_rot_per_rad", n.odom_sigma_rot_per_rad},
                  {"heading_drift_rad_per_s", n.heading_drift_rad_per_s},
                  {"scan_range_sigma_m", n.scan_range_sigma_m},
                  {"wifi_sigma_db", n.wifi_sigma_db},
                  {"ocr_p_sub", n.ocr.p_sub},
                  {"ocr_p_del", n.ocr.p_del},
                  {"ocr_p_ins", n.ocr.p_ins},
                  {"text_detection_probability", n.text_detection_probability},
                  {"viewpoint_jitter_m", n.viewpoint_jitter_m},
                  {"viewpoint_jitter_rad", n.viewpoint_jitter_rad}};
    const SensorModel& m = s.sensors;
    a["sensors"] = {{"scan_rays", m.scan_rays},
                    {"scan_max_range_m", m.scan_max_range_m},
                    {"text_range_m", m.text_range_m},
                    {"text_half_angle_rad", m.text_half_angle_rad},
                    {"wifi_sensitivity_dbm", m.wifi_sensitivity_dbm}};
    a["waypoints"] = Json::array();
    for (const Waypoint& w : s.waypoints) {
      Json wj = {{"position_m", vec_json(w.position)}, {"hold_s", w.hold_s}};
      if (w.facing_rad) wj["facing_rad"] = *w.facing_rad;
      a["waypoints"].push_back(wj);
    }
    j["agents"].push_back(a);
  }
  return j.dump(2) + "\n";
}

std::vector<AgentScript> scripts_from_text(const std::string& text) {
  return parsing("scripts", [&] {
    const Json j = Json::parse(text);
    std::vector<AgentScript> out;
    for (const Json& a : j.at("agents")) {
      AgentScript s;
      s.agent_id = a.at("agent_id").get<std::string>();
      s.seed = a.at("seed").get<std::uint64_t>();
      s.speed_mps = a.at("speed_mps").get<double>();
      s.turn_rate_rad_s = a.at("turn_rate_rad_s").get<double>();
      s.rates.scan_hz = a.at("scan_hz").get<double>();
      s.rates.wifi_hz = a.at("wifi_hz").get<double>();
      const Json& n = a.at("noise");
      s.noise.odom_sigma_trans_per_m = n.at("odom_sigma_trans_per_m").get<double>();
      s.noise.odom_sigma_rot_per_rad = n.at("odom_sigma_rot_per_rad").get<double>();
      s.noise.heading_drift_rad_per_s = n.at("heading_drift_rad_per_s").get<double>();
      s.noise.scan_range_sigma_m = n.at("scan_range_sigma_m").get<double>();
      s.noise.wifi_sigma_db = n.at("wifi_sigma_db").get<double>();
      s.noise.ocr.p_sub = n.at("ocr_p_sub").get<double>();
      s.noise.ocr.p_del = n.at("ocr_p_del").get<double>();
      s.noise.ocr.p_ins = n.at("ocr_p_ins").get<double>();
      s.noise.text_detection_probability = n.at("text_detection_probability").get<double>();
      s.noise.viewpoint_jitter_m = n.at("viewpoint_jitter_m").get<double>();
      s.noise.viewpoint_jitter_rad = n.at("viewpoint_jitter_rad").get<double>();
      const Json& m = a.at("sensors");
      s.sensors.scan_rays = m.at("scan_rays").get<int>();
      s.sensors.scan_max_range_m = m.at("scan_max_range_m").get<double>();
      s.sensors.text_range_m = m.at("text_range_m").get<double>();
      s.sensors.text_half_angle_rad = m.at("text_half_angle_rad").get<double>();
      s.sensors.wifi_sensitivity_dbm = m.at("wifi_sensitivity_dbm").get<double>();
      for (const Json& w : a.at("waypoints")) {
        Waypoint wp;
        wp.position = vec_from(w.at("position_m"));
        wp.hold_s = w.at("hold_s").get<double>();
        if (w.contains("facing_rad")) wp.facing_rad = w.at("facing_rad").get<double>();
        s.waypoints.push_back(wp);
      }
      out.push_back(std::move(s));
    }
    return out;
  });
}

// ---------------------------------------------------------------- recording

void write_recording(std::ostream& os, const Recording& recording) {
  for (const Event& e : recording.events) {
    Json j;
    j["t"] = e.t;
    j["agent"] = recording.agent_id;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, TruthEvent>) {
            j["kind"] = "truth";
            j["payload"] = {{"x", p.pose.x}, {"y", p.pose.y}, {"theta", p.pose.theta}};
          } else if constexpr (std::is_same_v<T, OdomEvent>) {
            j["kind"] = "odom";
            j["payload"] = {{"dx", p.dx}, {"dy", p.dy}, {"dtheta", p.dtheta}};
          } else if constexpr (std::is_same_v<T, ScanEvent>) {
            j["kind"] = "scan";
            Json pts = Json::array();
            for (const Vec2& v : p.points) pts.push_back({v.x, v.y});
            j["payload"] = {{"points", pts}};
          } else if constexpr (std::is_same_v<T, WifiEvent>) {
            j["kind"] = "wifi";
            Json rs = Json::array();
            for (const WifiReading& r : p.readings) rs.push_back({r.mac, r.rss_dbm});
            j["payload"] = {{"readings", rs}};
          } else {
            j["kind"] = "text";
            j["payload"] = {{"string", p.text}};
            if (p.sign_id) j["payload"]["sign_id"] = *p.sign_id;
          }
        },
        e.payload);
    os << j.dump() << '\n';
  }
}

Recording read_recording(std::istream& is, const std::string& agent_id) {
  Recording rec;
  rec.agent_id = agent_id;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    parsing("recording line " + std::to_string(lineno), [&] {
      const Json j = Json::parse(line);
      const std::string agent = j.at("agent").get<std::string>();
      if (agent != rec.agent_id) {
        throw FormatError("recording line " + std::to_string(lineno) + ": agent '" + agent +
                          "' in recording of '" + rec.agent_id + "'");
      }
      Event e;
      e.t = j.at("t").get<double>();
      const std::string kind = j.at("kind").get<std::string>();
      const Json& p = j.at("payload");
      if (kind == "truth") {
        e.payload = TruthEvent{{p.at("x").get<double>(), p.at("y").get<double>(), p.at("theta").get<double>()}};
      } else if (kind == "odom") {
        e.payload = OdomEvent{p.at("dx").get<double>(), p.at("dy").get<double>(), p.at("dtheta").get<double>()};
      } else if (kind == "scan") {
        ScanEvent s;
        for (const Json& v : p.at("points")) s.points.push_back(vec_from(v));
        e.payload = std::move(s);
      } else if (kind == "wifi") {
        WifiEvent w;
        for (const Json& r : p.at("readings")) {
          if (!r.is_array() || r.size() != 2) throw FormatError("wifi reading needs [mac, rss]");
          w.readings.push_back({r[0].get<std::string>(), r[1].get<double>()});
        }
        e.payload = std::move(w);
      } else if (kind == "text") {
        TextEvent t;
        t.text = p.at("string").get<std::string>();
        if (p.contains("sign_id")) t.sign_id = p.at("sign_id").get<std::string>();
        e.payload = std::move(t);
      } else {
        throw FormatError("unknown event kind '" + kind + "'");
      }
      if (!rec.events.empty()) {
        const Event& last = rec.events.back();
        if (e.t < last.t || (e.t == last.t && e.payload.index() <= last.payload.index())) {
          throw FormatError("recording line " + std::to_string(lineno) + ": events out of order");
        }
      }
      rec.events.push_back(std::move(e));
      return 0;
    });
  }
  return rec;
}

// ------------------------------------------------------------- match report

void write_match_report(std::ostream& os, const MatchReport& report) {
  Json h;
  h["kind"] = "match_report";
  h["modality"] = to_string(report.modality);
  h["thresholds"] = thresholds_json(report.thresholds);
  h["sigma_scale_db"] = report.sigma_scale_db;
  h["candidate_count"] = report.candidates.size();
  os << h.dump() << '\n';
  for (const MatchCandidate& c : report.candidates) {
    Json j;
    j["a"] = ref_text(c.a);
    j["b"] = ref_text(c.b);
    j["verdict"] = to_string(c.verdict);
    j["text_score"] = opt_json(c.text_score);
    j["wifi_evaluated"] = c.wifi_evaluated;
    j["mac_similarity"] = c.wifi.mac_similarity;
    j["common_macs"] = c.wifi.common_macs;
    j["rss_distance_db"] = opt_json(c.wifi.rss_distance_db);
    j["rss_similarity"] = opt_json(c.wifi.rss_similarity);
    j["wifi_degenerate"] = c.wifi.degenerate;
    j["degenerate"] = c.degenerate;
    os << j.dump() << '\n';
  }
}

MatchReport read_match_report(std::istream& is) {
  MatchReport report;
  std::string line;
  if (!std::getline(is, line)) throw FormatError("match report: missing header");
  std::size_t expected = 0;
  parsing("match report header", [&] {
    const Json h = Json::parse(line);
    if (h.at("kind").get<std::string>() != "match_report") throw FormatError("match report: bad header");
    report.modality = modality_from_string(h.at("modality").get<std::string>());
    report.thresholds = thresholds_from(h.at("thresholds"));
    report.sigma_scale_db = h.at("sigma_scale_db").get<double>();
    expected = h.at("candidate_count").get<std::size_t>();
    return 0;
  });
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    parsing("match report line " + std::to_string(lineno), [&] {
      const Json j = Json::parse(line);
      MatchCandidate c;
      c.a = ref_from(j.at("a").get<std::string>());
      c.b = ref_from(j.at("b").get<std::string>());
      c.verdict = verdict_from_string(j.at("verdict").get<std::string>());
      c.text_score = opt_from(j.at("text_score"));
      c.wifi_evaluated = j.at("wifi_evaluated").get<bool>();
      c.wifi.mac_similarity = j.at("mac_similarity").get<double>();
      c.wifi.common_macs = j.at("common_macs").get<std::size_t>();
      c.wifi.rss_distance_db = opt_from(j.at("rss_distance_db"));
      c.wifi.rss_similarity = opt_from(j.at("rss_similarity"));
      c.wifi.degenerate = j.at("wifi_degenerate").get<bool>();
      c.degenerate = j.at("degenerate").get<bool>();
      report.candidates.push_back(std::move(c));
      return 0;
    });
  }
  if (report.candidates.size() != expected) {
    throw FormatError("match report: header announces " + std::to_string(expected) +
                      " candidates, found " + std::to_string(report.candidates.size()));
  }
  return report;
}

// ---------------------------------------------------------------- alignment

void write_trajectory_csv(std::ostream& os, const std::vector<Keyframe>& keyframes,
                          const AlignmentSummary& alignment, const std::string& agent_id) {
  os << "agent,keyframe_id,t_s,x_m,y_m,theta_rad,component\n";
  for (const Keyframe& k : keyframes) {
    if (k.agent_id != agent_id) continue;
    const Pose2& p = alignment.poses.at(k.ref());
    os << k.agent_id << ',' << k.keyframe_id << ',' << format_double(k.timestamp) << ','
       << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.theta) << ','
       << alignment.component_of.at(k.ref()) << '\n';
  }
}

void read_trajectory_csv(std::istream& is, AlignmentSummary& out) {
  std::string line;
  if (!std::getline(is, line) || line != "agent,keyframe_id,t_s,x_m,y_m,theta_rad,component") {
    throw FormatError("trajectory: unexpected header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> c = split_csv(line);
    if (c.size() != 7) throw FormatError("trajectory: expected 7 columns in '" + line + "'");
    const KeyframeRef ref = ref_from(c[0] + ":" + c[1]);
    out.poses[ref] = Pose2{parse_double(c[3]), parse_double(c[4]), parse_double(c[5])};
    out.component_of[ref] = static_cast<std::size_t>(parse_double(c[6]));
  }
}

void write_point_csv(std::ostream& os, const PointCloud2& cloud) {
  os << "x_m,y_m\n";
  for (const Vec2& p : cloud.points) os << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

std::string alignment_to_text(const AlignmentResult& a) {
  const PoseGraph& g = a.build.graph;
  Json j;
  j["format"] = "cslam.alignment/1";
  j["component_count"] = a.component_count;
  j["node_count"] = g.nodes.size();
  j["loop_edge_count"] = g.loop_edge_count();
  j["dropped_matches"] = a.build.dropped_matches;
  j["converged"] = a.optimization.converged;
  j["iterations"] = a.optimization.iterations;
  j["objective_history"] = a.optimization.objective_history;
  j["gauge_keyframes"] = Json::array();
  for (std::size_t n : a.optimization.gauge_nodes) j["gauge_keyframes"].push_back(ref_text(g.nodes[n]));
  j["loop_edges"] = Json::array();
  for (const PoseGraphEdge& e : g.edges) {
    if (e.kind != EdgeKind::kLoop) continue;
    j["loop_edges"].push_back({{"from", ref_text(g.nodes[e.from])},
                               {"to", ref_text(g.nodes[e.to])},
                               {"dx_m", e.measurement.x},
                               {"dy_m", e.measurement.y},
                               {"dtheta_rad", e.measurement.theta},
                               {"weight", e.weight}});
  }
  j["warnings"] = a.warnings;
  return j.dump(2) + "\n";
}

std::size_t loop_edges_from_text(const std::string& text) {
  return parsing("alignment", [&] { return Json::parse(text).at("loop_edge_count").get<std::size_t>(); });
}

// ------------------------------------------------------------------ metrics

std::string metrics_to_text(const MetricsReport& r) {
  Json j;
  j["format"] = "cslam.metrics/1";
  j["scenario"] = r.scenario;
  j["anchors"] = {r.anchors.first, r.anchors.second};
  j["travel_distance_m"] = r.travel_distance_m;
  j["location_recognition"] = Json::array();
  for (const PrMetrics& m : r.location_recognition) {
    j["location_recognition"].push_back({{"modality", to_string(m.modality)},
                                         {"alpha", m.thresholds.alpha},
                                         {"beta", m.thresholds.beta},
                                         {"gamma", m.thresholds.gamma},
                                         {"precision", opt_json(m.precision)},
                                         {"recall", opt_json(m.recall)},
                                         {"true_positives", m.true_positives},
                                         {"false_positives", m.false_positives},
                                         {"false_negatives", m.false_negatives}});
  }
  j["end_point_error"] = Json::array();
  for (const EpeRow& e : r.end_point_error) {
    j["end_point_error"].push_back({{"method", e.method},
                                    {"alpha", e.thresholds.alpha},
                                    {"beta", e.thresholds.beta},
                                    {"gamma", e.thresholds.gamma},
                                    {"epe_m", opt_json(e.epe_m)},
                                    {"loop_edges", e.loop_edges}});
  }
  j["min_loop_separation_s"] = r.location_recognition.empty()
                                   ? 0.0
                                   : r.location_recognition.front().thresholds.min_loop_separation_s;
  return j.dump(2) + "\n";
}

MetricsReport metrics_from_text(const std::string& text) {
  return parsing("metrics", [&] {
    const Json j = Json::parse(text);
    MetricsReport r;
    const double sep = j.at("min_loop_separation_s").get<double>();
    r.scenario = j.at("scenario").get<std::string>();
    r.anchors = {j.at("anchors").at(0).get<std::string>(), j.at("anchors").at(1).get<std::string>()};
    r.travel_distance_m = j.at("travel_distance_m").get<double>();
    for (const Json& m : j.at("location_recognition")) {
      PrMetrics p;
      p.modality = modality_from_string(m.at("modality").get<std::string>());
      p.thresholds = {m.at("alpha").get<double>(), m.at("beta").get<double>(),
                      m.at("gamma").get<double>(), sep};
      p.precision = opt_from(m.at("precision"));
      p.recall = opt_from(m.at("recall"));
      p.true_positives = m.at("true_positives").get<std::size_t>();
      p.false_positives = m.at("false_positives").get<std::size_t>();
      p.false_negatives = m.at("false_negatives").get<std::size_t>();
      r.location_recognition.push_back(p);
    }
    for (const Json& e : j.at("end_point_error")) {
      r.end_point_error.push_back({e.at("method").get<std::string>(),
                                   {e.at("alpha").get<double>(), e.at("beta").get<double>(),
                                    e.at("gamma").get<double>(), sep},
                                   opt_from(e.at("epe_m")),
                                   e.at("loop_edges").get<std::size_t>()});
    }
    return r;
  });
}

// -------------------------------------------------------------------- files

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << content;
  if (!out) throw FormatError("failed writing " + path.string());
}

}  // namespace cslam
