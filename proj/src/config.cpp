#include "cslam/config.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "cslam/scenarios.hpp"
#include "json.hpp"

namespace cslam {

using Json = nlohmann::ordered_json;

namespace {

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.contains(k)) throw ConfigError("config: unknown key '" + k + "' in " + where);
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

using Setter = std::function<void(AgentScript&, double)>;

const std::vector<std::pair<std::string, Setter>>& override_table() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"speed_mps", [](AgentScript& s, double v) { s.speed_mps = v; }},
      {"turn_rate_rad_s", [](AgentScript& s, double v) { s.turn_rate_rad_s = v; }},
      {"scan_hz", [](AgentScript& s, double v) { s.rates.scan_hz = v; }},
      {"wifi_hz", [](AgentScript& s, double v) { s.rates.wifi_hz = v; }},
      {"odom_sigma_trans_per_m", [](AgentScript& s, double v) { s.noise.odom_sigma_trans_per_m = v; }},
      {"odom_sigma_rot_per_rad", [](AgentScript& s, double v) { s.noise.odom_sigma_rot_per_rad = v; }},
      {"heading_drift_rad_per_s", [](AgentScript& s, double v) { s.noise.heading_drift_rad_per_s = v; }},
      {"scan_range_sigma_m", [](AgentScript& s, double v) { s.noise.scan_range_sigma_m = v; }},
      {"wifi_sigma_db", [](AgentScript& s, double v) { s.noise.wifi_sigma_db = v; }},
      {"ocr_p_sub", [](AgentScript& s, double v) { s.noise.ocr.p_sub = v; }},
      {"ocr_p_del", [](AgentScript& s, double v) { s.noise.ocr.p_del = v; }},
      {"ocr_p_ins", [](AgentScript& s, double v) { s.noise.ocr.p_ins = v; }},
      {"text_detection_probability", [](AgentScript& s, double v) { s.noise.text_detection_probability = v; }},
      {"viewpoint_jitter_m", [](AgentScript& s, double v) { s.noise.viewpoint_jitter_m = v; }},
      {"viewpoint_jitter_rad", [](AgentScript& s, double v) { s.noise.viewpoint_jitter_rad = v; }},
      {"text_range_m", [](AgentScript& s, double v) { s.sensors.text_range_m = v; }},
      {"wifi_sensitivity_dbm", [](AgentScript& s, double v) { s.sensors.wifi_sensitivity_dbm = v; }},
      {"seed", [](AgentScript& s, double v) { s.seed = static_cast<std::uint64_t>(v); }},
  };
  return table;
}

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string("config: ") + name + " must be in [0, 1]");
}

}  // namespace

const std::vector<std::string>& agent_override_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : override_table()) k.push_back(name);
    return k;
  }();
  return keys;
}

void validate(const RunConfig& c) {
  const Thresholds& th = c.pipeline.thresholds;
  check_unit(th.alpha, "alpha");
  check_unit(th.beta, "beta");
  check_unit(th.gamma, "gamma");
  if (!(th.min_loop_separation_s >= 0.0)) throw ConfigError("config: min_loop_separation_s must be >= 0");
  if (!(c.pipeline.sigma_scale_db > 0.0)) throw ConfigError("config: sigma_scale_db must be > 0");
  if (!(c.pipeline.keyframes.spacing_m > 0.0)) throw ConfigError("config: keyframe spacing_m must be > 0");
  if (!(c.pipeline.keyframes.wifi_window_s >= 0.0)) throw ConfigError("config: window_s must be >= 0");
  if (c.pipeline.sweep_alphas.empty() || c.pipeline.sweep_betas_gammas.empty()) {
    throw ConfigError("config: sweep lists must be non-empty");
  }
  for (double v : c.pipeline.sweep_alphas) check_unit(v, "sweep alpha");
  for (double v : c.pipeline.sweep_betas_gammas) check_unit(v, "sweep beta/gamma");
  check_unit(c.pipeline.text_only_epe_alpha, "text_only_alpha");
  check_unit(c.pipeline.wifi_only_epe_beta_gamma, "wifi_only_beta_gamma");
  if (c.pipeline.alignment.icp.max_iterations < 1) throw ConfigError("config: icp max_iterations must be >= 1");
  if (!(c.pipeline.alignment.icp.correspondence_radius > 0.0)) {
    throw ConfigError("config: icp correspondence_radius_m must be > 0");
  }
  if (c.pipeline.alignment.optimizer.max_outer_iterations < 1) {
    throw ConfigError("config: optimizer max_outer_iterations must be >= 1");
  }
  if (!c.floorplan_path || !c.scripts_path) {
    const auto names = known_scenarios();
    if (std::find(names.begin(), names.end(), c.scenario) == names.end()) {
      std::string known;
      for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
      throw ConfigError("config: unknown scenario '" + c.scenario + "' (known: " + known + ")");
    }
  }
  for (const auto* p : {&c.floorplan_path, &c.scripts_path}) {
    if (*p && !std::filesystem::exists(**p)) throw ConfigError("config: " + (*p)->string() + " does not exist");
  }
  for (const auto& [agent, values] : c.agent_overrides) {
    for (const auto& [key, v] : values) {
      if (std::find(agent_override_keys().begin(), agent_override_keys().end(), key) ==
          agent_override_keys().end()) {
        throw ConfigError("config: unknown agent parameter '" + key + "'");
      }
    }
  }
}

RunConfig config_from_text(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig c;
  try {
    const Json j = Json::parse(text);
    check_keys(j, "config",
               {"scenario", "seed", "floorplan_path", "scripts_path", "noise_free", "unique_texts",
                "thresholds", "wifi", "text", "keyframes", "icp", "optimizer", "odometry_model",
                "merge_voxel_m", "sweep", "epe_variants", "agents", "out_dir"});
    read(j, "scenario", c.scenario);
    read(j, "seed", c.seed);
    auto path = [&](const char* key, std::optional<std::filesystem::path>& out) {
      if (!j.contains(key) || j.at(key).is_null()) return;
      std::filesystem::path p = j.at(key).get<std::string>();
      out = p.is_relative() ? base_dir / p : p;
    };
    path("floorplan_path", c.floorplan_path);
    path("scripts_path", c.scripts_path);
    read(j, "noise_free", c.noise_free);
    read(j, "unique_texts", c.unique_texts);
    PipelineOptions& p = c.pipeline;
    if (j.contains("thresholds")) {
      const Json& t = j.at("thresholds");
      check_keys(t, "thresholds", {"alpha", "beta", "gamma", "min_loop_separation_s"});
      read(t, "alpha", p.thresholds.alpha);
      read(t, "beta", p.thresholds.beta);
      read(t, "gamma", p.thresholds.gamma);
      read(t, "min_loop_separation_s", p.thresholds.min_loop_separation_s);
    }
    if (j.contains("wifi")) {
      const Json& w = j.at("wifi");
      check_keys(w, "wifi", {"sigma_scale_db", "window_s", "normalize_filter_by_count"});
      read(w, "sigma_scale_db", p.sigma_scale_db);
      read(w, "window_s", p.keyframes.wifi_window_s);
      read(w, "normalize_filter_by_count", p.keyframes.rss_filter.normalize_by_count);
    }
    if (j.contains("text")) {
      check_keys(j.at("text"), "text", {"case_insensitive"});
      read(j.at("text"), "case_insensitive", p.text.case_insensitive);
    }
    if (j.contains("keyframes")) {
      check_keys(j.at("keyframes"), "keyframes", {"spacing_m"});
      read(j.at("keyframes"), "spacing_m", p.keyframes.spacing_m);
    }
    if (j.contains("icp")) {
      const Json& i = j.at("icp");
      check_keys(i, "icp", {"max_iterations", "correspondence_radius_m", "tolerance"});
      read(i, "max_iterations", p.alignment.icp.max_iterations);
      read(i, "correspondence_radius_m", p.alignment.icp.correspondence_radius);
      read(i, "tolerance", p.alignment.icp.tolerance);
    }
    if (j.contains("optimizer")) {
      const Json& o = j.at("optimizer");
      check_keys(o, "optimizer", {"max_outer_iterations", "robust_kernel_scale"});
      read(o, "max_outer_iterations", p.alignment.optimizer.max_outer_iterations);
      read(o, "robust_kernel_scale", p.alignment.optimizer.robust_kernel_scale);
    }
    if (j.contains("odometry_model")) {
      const Json& o = j.at("odometry_model");
      check_keys(o, "odometry_model", {"sigma_trans_per_m", "sigma_rot_per_rad", "sigma_heading_per_s"});
      read(o, "sigma_trans_per_m", p.alignment.odometry.sigma_trans_per_m);
      read(o, "sigma_rot_per_rad", p.alignment.odometry.sigma_rot_per_rad);
      read(o, "sigma_heading_per_s", p.alignment.odometry.sigma_heading_per_s);
    }
    read(j, "merge_voxel_m", p.alignment.voxel_size);
    if (j.contains("sweep")) {
      check_keys(j.at("sweep"), "sweep", {"alphas", "betas_gammas"});
      read(j.at("sweep"), "alphas", p.sweep_alphas);
      read(j.at("sweep"), "betas_gammas", p.sweep_betas_gammas);
    }
    if (j.contains("epe_variants")) {
      check_keys(j.at("epe_variants"), "epe_variants", {"text_only_alpha", "wifi_only_beta_gamma"});
      read(j.at("epe_variants"), "text_only_alpha", p.text_only_epe_alpha);
      read(j.at("epe_variants"), "wifi_only_beta_gamma", p.wifi_only_epe_beta_gamma);
    }
    if (j.contains("agents")) {
      for (const auto& [agent, values] : j.at("agents").items()) {
        for (const auto& [key, v] : values.items()) c.agent_overrides[agent][key] = v.get<double>();
      }
    }
    if (j.contains("out_dir")) {
      std::filesystem::path o = j.at("out_dir").get<std::string>();
      c.out_dir = o.is_relative() ? base_dir / o : o;
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

std::string config_to_text(const RunConfig& c) {
  const PipelineOptions& p = c.pipeline;
  Json j;
  j["scenario"] = c.scenario;
  j["seed"] = c.seed;
  j["floorplan_path"] = c.floorplan_path ? Json(c.floorplan_path->string()) : Json(nullptr);
  j["scripts_path"] = c.scripts_path ? Json(c.scripts_path->string()) : Json(nullptr);
  j["noise_free"] = c.noise_free;
  j["unique_texts"] = c.unique_texts;
  j["thresholds"] = {{"alpha", p.thresholds.alpha},
                     {"beta", p.thresholds.beta},
                     {"gamma", p.thresholds.gamma},
                     {"min_loop_separation_s", p.thresholds.min_loop_separation_s}};
  j["wifi"] = {{"sigma_scale_db", p.sigma_scale_db},
               {"window_s", p.keyframes.wifi_window_s},
               {"normalize_filter_by_count", p.keyframes.rss_filter.normalize_by_count}};
  j["text"] = {{"case_insensitive", p.text.case_insensitive}};
  j["keyframes"] = {{"spacing_m", p.keyframes.spacing_m}};
  j["icp"] = {{"max_iterations", p.alignment.icp.max_iterations},
              {"correspondence_radius_m", p.alignment.icp.correspondence_radius},
              {"tolerance", p.alignment.icp.tolerance}};
  j["optimizer"] = {{"max_outer_iterations", p.alignment.optimizer.max_outer_iterations},
                    {"robust_kernel_scale", p.alignment.optimizer.robust_kernel_scale}};
  j["odometry_model"] = {{"sigma_trans_per_m", p.alignment.odometry.sigma_trans_per_m},
                         {"sigma_rot_per_rad", p.alignment.odometry.sigma_rot_per_rad},
                         {"sigma_heading_per_s", p.alignment.odometry.sigma_heading_per_s}};
  j["merge_voxel_m"] = p.alignment.voxel_size;
  j["sweep"] = {{"alphas", p.sweep_alphas}, {"betas_gammas", p.sweep_betas_gammas}};
  j["epe_variants"] = {{"text_only_alpha", p.text_only_epe_alpha},
                       {"wifi_only_beta_gamma", p.wifi_only_epe_beta_gamma}};
  j["agents"] = Json::object();
  for (const auto& [agent, values] : c.agent_overrides) {
    for (const auto& [k, v] : values) j["agents"][agent][k] = v;
  }
  j["out_dir"] = c.out_dir.string();
  return j.dump(2) + "\n";
}

void apply_agent_overrides(std::vector<AgentScript>& scripts, const RunConfig& config) {
  for (const auto& [agent, values] : config.agent_overrides) {
    if (agent == "*") continue;
    const bool known = std::any_of(scripts.begin(), scripts.end(),
                                   [&](const AgentScript& s) { return s.agent_id == agent; });
    if (!known) throw ConfigError("config: overrides for unknown agent '" + agent + "'");
  }
  auto apply = [](AgentScript& s, const std::map<std::string, double>& values) {
    for (const auto& [key, v] : values) {
      auto it = std::find_if(override_table().begin(), override_table().end(),
                             [&](const auto& e) { return e.first == key; });
      if (it == override_table().end()) throw ConfigError("config: unknown agent parameter '" + key + "'");
      it->second(s, v);
    }
  };
  for (AgentScript& s : scripts) {
    if (auto it = config.agent_overrides.find("*"); it != config.agent_overrides.end()) apply(s, it->second);
    if (auto it = config.agent_overrides.find(s.agent_id); it != config.agent_overrides.end()) apply(s, it->second);
  }
}

}  // namespace cslam
