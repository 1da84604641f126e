#include "cslam/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "cslam/scenarios.hpp"

namespace cslam {

namespace {

void save_config(const RunConfig& config, const RunLayout& layout) {
  write_file(layout.config(), config_to_text(config));
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

std::string fmt_opt(const std::optional<double>& v, int digits = 3) {
  return v ? fmt(*v, digits) : "n/a";
}

std::vector<Keyframe> load_keyframes(const RunConfig& config, const RunLayout& layout) {
  const std::vector<Recording> recs = load_recordings(layout);
  return extract_all_keyframes(recs, config.pipeline.keyframes);
}

}  // namespace

std::vector<Recording> load_recordings(const RunLayout& layout) {
  if (!std::filesystem::is_directory(layout.recordings())) {
    throw FormatError("no recordings directory at " + layout.recordings().string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(layout.recordings())) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Recording> out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw FormatError("cannot read " + f.string());
    out.push_back(read_recording(in, f.stem().string()));
  }
  return out;
}

void cmd_generate(const RunConfig& config, std::ostream& log) {
  const RunLayout layout{config.out_dir};
  Scenario sc;
  if (!config.floorplan_path || !config.scripts_path) sc = scripted_scenario(config.scenario, config.seed);
  if (config.floorplan_path) sc.plan = floorplan_from_text(read_file(*config.floorplan_path));
  if (config.scripts_path) sc.scripts = scripts_from_text(read_file(*config.scripts_path));
  if (config.noise_free) sc = make_noise_free(std::move(sc));
  if (config.unique_texts) sc = make_texts_unique(std::move(sc));
  apply_agent_overrides(sc.scripts, config);

  save_config(config, layout);
  write_file(layout.floorplan(), floorplan_to_text(sc.plan));
  write_file(layout.scripts(), scripts_to_text(sc.scripts));

  const auto dups = sc.plan.duplicate_texts();
  log << "floorplan: " << sc.plan.room_count << " rooms, " << sc.plan.signs.size() << " signs, "
      << sc.plan.aps.size() << " access points, " << sc.plan.anchors.size() << " anchors\n";
  log << "duplicate text groups: " << dups.size() << "\n";
  for (const std::string& t : dups) {
    const auto n = std::count_if(sc.plan.signs.begin(), sc.plan.signs.end(),
                                 [&](const Sign& s) { return s.text == t; });
    log << "  \"" << t << "\" x" << n << "\n";
  }
  log << "agents: " << sc.scripts.size() << "\n";
  log << "wrote " << layout.floorplan().string() << " and " << layout.scripts().string() << "\n";
}

void cmd_simulate(const RunConfig& config, std::ostream& log) {
  const RunLayout layout{config.out_dir};
  const FloorPlan plan = floorplan_from_text(read_file(layout.floorplan()));
  const std::vector<AgentScript> scripts = scripts_from_text(read_file(layout.scripts()));
  save_config(config, layout);
  std::filesystem::create_directories(layout.recordings());
  for (const AgentScript& s : scripts) {
    const Recording rec = simulate_recording(plan, s);
    std::ostringstream ss;
    write_recording(ss, rec);
    write_file(layout.recording(s.agent_id), ss.str());
    std::size_t texts = 0;
    for (const Event& e : rec.events) texts += std::holds_alternative<TextEvent>(e.payload);
    log << "agent " << s.agent_id << ": " << rec.events.size() << " events, " << texts
        << " text observations, " << fmt(truth_travel_distance(rec), 1) << " m\n";
  }
}

void cmd_match(const RunConfig& config, std::ostream& log) {
  const RunLayout layout{config.out_dir};
  const std::vector<Keyframe> keyframes = load_keyframes(config, layout);
  save_config(config, layout);
  MatchReport report;
  report.thresholds = config.pipeline.thresholds;
  report.modality = Modality::kFused;
  report.sigma_scale_db = config.pipeline.sigma_scale_db;
  report.candidates = match_all(keyframes, report.thresholds,
                                config.pipeline.match_options(Modality::kFused));
  std::ostringstream ss;
  write_match_report(ss, report);
  write_file(layout.match_report(), ss.str());

  std::map<Verdict, std::size_t> counts;
  for (const MatchCandidate& c : report.candidates) ++counts[c.verdict];
  log << "candidates: " << report.candidates.size();
  for (Verdict v : {Verdict::kAccepted, Verdict::kRejectedText, Verdict::kRejectedMac, Verdict::kRejectedRss}) {
    log << ", " << to_string(v) << " " << counts[v];
  }
  log << "\n";
}

void cmd_align(const RunConfig& config, std::ostream& log) {
  const RunLayout layout{config.out_dir};
  const std::vector<Keyframe> keyframes = load_keyframes(config, layout);
  std::ifstream in(layout.match_report(), std::ios::binary);
  if (!in) throw FormatError("cannot read " + layout.match_report().string());
  const MatchReport report = read_match_report(in);
  save_config(config, layout);

  const AlignmentResult result = run_alignment(keyframes, report.candidates, config.pipeline.alignment);
  const AlignmentSummary summary = summarize(result);
  std::vector<std::string> agents;
  for (const Keyframe& k : keyframes) {
    if (std::find(agents.begin(), agents.end(), k.agent_id) == agents.end()) agents.push_back(k.agent_id);
  }
  std::filesystem::create_directories(layout.trajectories());
  for (const std::string& a : agents) {
    std::ostringstream ss;
    write_trajectory_csv(ss, keyframes, summary, a);
    write_file(layout.trajectories() / (a + ".csv"), ss.str());
  }
  std::ostringstream map;
  write_point_csv(map, result.merged_map);
  write_file(layout.merged_map(), map.str());
  write_file(layout.alignment(), alignment_to_text(result));

  log << "keyframes: " << keyframes.size() << ", loop edges: " << summary.loop_edges
      << ", components: " << result.component_count << ", objective "
      << (result.optimization.objective_history.empty() ? 0.0 : result.optimization.final_objective())
      << "\n";
  for (const std::string& w : result.warnings) log << "warning: " << w << "\n";
}

void cmd_evaluate(const RunConfig& config, bool sweep, std::ostream& log) {
  const RunLayout layout{config.out_dir};
  const FloorPlan plan = floorplan_from_text(read_file(layout.floorplan()));
  const std::vector<Recording> recs = load_recordings(layout);
  const std::vector<Keyframe> keyframes = extract_all_keyframes(recs, config.pipeline.keyframes);
  AlignmentSummary fused;
  if (std::filesystem::is_directory(layout.trajectories())) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(layout.trajectories())) {
      if (e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f, std::ios::binary);
      read_trajectory_csv(in, fused);
    }
  } else {
    throw FormatError("no trajectories at " + layout.trajectories().string() + "; run align first");
  }
  fused.loop_edges = loop_edges_from_text(read_file(layout.alignment()));
  save_config(config, layout);

  const MetricsReport report =
      evaluate_run(config.scenario, plan, recs, keyframes, fused, config.pipeline, sweep);
  write_file(layout.metrics(), metrics_to_text(report));

  log << "travel distance: " << fmt(report.travel_distance_m, 2) << " m\n";
  log << "location recognition (modality alpha beta gamma: precision recall):\n";
  for (const PrMetrics& m : report.location_recognition) {
    log << "  " << to_string(m.modality) << " " << fmt(m.thresholds.alpha, 2) << " "
        << fmt(m.thresholds.beta, 2) << " " << fmt(m.thresholds.gamma, 2) << ": "
        << fmt_opt(m.precision) << " " << fmt_opt(m.recall) << "\n";
  }
  log << "end point error (" << report.anchors.first << " / " << report.anchors.second << "):\n";
  for (const EpeRow& e : report.end_point_error) {
    log << "  " << e.method << ": " << (e.epe_m ? fmt(*e.epe_m) + " m" : std::string("disconnected"))
        << "\n";
  }
}

void cmd_run_all(const RunConfig& config, bool sweep, std::ostream& log) {
  cmd_generate(config, log);
  cmd_simulate(config, log);
  cmd_match(config, log);
  cmd_align(config, log);
  cmd_evaluate(config, sweep, log);
}

}  // namespace cslam
