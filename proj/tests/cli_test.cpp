#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cslam/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string("'") + CSLAM_CLI_PATH + "' " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string dir_prefix() { return "cslam_cli_test_" + std::to_string(getpid()) + "_"; }

// Removes this process's directories at exit.
class TempCleanup : public ::testing::Environment {
 public:
  void TearDown() override {
    for (const auto& e : fs::directory_iterator(fs::temp_directory_path())) {
      if (e.path().filename().string().starts_with(dir_prefix())) fs::remove_all(e.path());
    }
  }
};

[[maybe_unused]] ::testing::Environment* const cleanup =
    ::testing::AddGlobalTestEnvironment(new TempCleanup);

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / (dir_prefix() + name);
  fs::remove_all(p);
  return p;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

// Keeps only the lines without `needle`.
void drop_lines_containing(const fs::path& file, const std::string& needle) {
  std::istringstream in(cslam::read_file(file));
  std::string kept;
  for (std::string line; std::getline(in, line);) {
    if (line.find(needle) == std::string::npos) kept += line + "\n";
  }
  cslam::write_file(file, kept);
}

std::vector<fs::path> recording_files(const fs::path& run) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(run / "recordings")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Shared run, produced once.
const fs::path& base_run() {
  static const fs::path dir = [] {
    const fs::path d = fresh_dir("base") / "nested" / "run";
    const Result r = cli("run-all --out " + quoted(d));
    EXPECT_EQ(r.code, 0) << r.output;
    return d;
  }();
  return dir;
}

fs::path copy_of_base(const std::string& name) {
  const fs::path d = fresh_dir(name);
  fs::copy(base_run(), d, fs::copy_options::recursive);
  // The saved config names the original output directory; flags override it.
  return d;
}

}  // namespace

TEST(Cli, RunAllWritesEveryArtifact) {
  const fs::path& run = base_run();
  for (const char* f : {"run_config.json", "floorplan.json", "scripts.json", "match_report.jsonl",
                        "merged_map.csv", "alignment.json", "metrics.json"}) {
    EXPECT_TRUE(fs::exists(run / f)) << f;
  }
  const auto recs = recording_files(run);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].filename(), "A.jsonl");
  EXPECT_EQ(recs[2].filename(), "C.jsonl");
  std::size_t trajectories = 0;
  for (const auto& e : fs::directory_iterator(run / "trajectories")) trajectories += e.is_regular_file();
  EXPECT_EQ(trajectories, 3u);
  const cslam::MetricsReport m = cslam::metrics_from_text(cslam::read_file(run / "metrics.json"));
  EXPECT_EQ(m.location_recognition.size(), 3u);
  EXPECT_EQ(m.end_point_error.size(), 4u);
}

TEST(Cli, EvaluateSweepGivesFullGrid) {
  const fs::path run = copy_of_base("sweep");
  const Result r = cli("evaluate --sweep --out " + quoted(run));
  ASSERT_EQ(r.code, 0) << r.output;
  const cslam::MetricsReport m = cslam::metrics_from_text(cslam::read_file(run / "metrics.json"));
  ASSERT_EQ(m.location_recognition.size(), 3u + 3u + 9u);
  EXPECT_EQ(m.location_recognition[0].modality, cslam::Modality::kTextOnly);
  EXPECT_EQ(m.location_recognition[3].modality, cslam::Modality::kWifiOnly);
  EXPECT_EQ(m.location_recognition[6].modality, cslam::Modality::kFused);
  EXPECT_NE(r.output.find("fused 0.80 0.80 0.80"), std::string::npos) << r.output;
}

TEST(Cli, GenerateSummaryListsDuplicateGroups) {
  const fs::path run = fresh_dir("generate");
  const Result r = cli("generate --out " + quoted(run));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("duplicate text groups: 3"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("agents: 3"), std::string::npos) << r.output;
}

TEST(Cli, UsageAndConfigErrorsExitOne) {
  const fs::path run = fresh_dir("usage");
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("run-all --bogus --out " + quoted(run)).code, 1);
  EXPECT_EQ(cli("run-all --alpha 2 --out " + quoted(run)).code, 1);
  EXPECT_EQ(cli("run-all --seed abc --out " + quoted(run)).code, 1);
  const Result unknown = cli("generate --scenario nope --out " + quoted(run));
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.output.find("scene01"), std::string::npos) << unknown.output;
  const fs::path cfg = run / "bad.json";
  cslam::write_file(cfg, "{\"no_such_key\": 1}");
  EXPECT_EQ(cli("generate --config " + quoted(cfg) + " --out " + quoted(run)).code, 1);
  EXPECT_EQ(cli("generate --config " + quoted(run / "missing.json")).code, 1);
}

TEST(Cli, PipelineFailuresExitTwo) {
  const Result missing = cli("evaluate --out " + quoted(fresh_dir("empty")));
  EXPECT_EQ(missing.code, 2) << missing.output;

  const fs::path run = copy_of_base("no_truth");
  for (const fs::path& f : recording_files(run)) drop_lines_containing(f, "\"kind\":\"truth\"");
  const Result r = cli("evaluate --out " + quoted(run));
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(r.output.find("truth"), std::string::npos) << r.output;
}

TEST(Cli, AlphaZeroRejectsNothingAtTextStage) {
  const fs::path run = copy_of_base("alpha0");
  const Result r = cli("match --alpha 0 --out " + quoted(run));
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string report = cslam::read_file(run / "match_report.jsonl");
  EXPECT_EQ(report.find("rejected_text"), std::string::npos);
  EXPECT_NE(report.find("accepted"), std::string::npos);
}

TEST(Cli, RecordingsWithoutTextGiveEmptyReport) {
  const fs::path run = copy_of_base("no_text");
  for (const fs::path& f : recording_files(run)) drop_lines_containing(f, "\"kind\":\"text\"");
  const Result r = cli("match --out " + quoted(run));
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream in(run / "match_report.jsonl");
  const cslam::MatchReport rep = cslam::read_match_report(in);
  EXPECT_TRUE(rep.candidates.empty());
}

TEST(Cli, SameSeedSameBytes) {
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b"), c = fresh_dir("det_c");
  ASSERT_EQ(cli("run-all --seed 11 --out " + quoted(a)).code, 0);
  ASSERT_EQ(cli("run-all --seed 11 --out " + quoted(b)).code, 0);
  ASSERT_EQ(cli("run-all --seed 12 --out " + quoted(c)).code, 0);
  for (const fs::path& f : recording_files(a)) {
    EXPECT_EQ(cslam::read_file(f), cslam::read_file(b / "recordings" / f.filename())) << f;
    EXPECT_NE(cslam::read_file(f), cslam::read_file(c / "recordings" / f.filename())) << f;
  }
  for (const char* f : {"floorplan.json", "match_report.jsonl", "alignment.json", "metrics.json",
                        "merged_map.csv"}) {
    EXPECT_EQ(cslam::read_file(a / f), cslam::read_file(b / f)) << f;
  }
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path run = fresh_dir("precedence");
  const fs::path cfg = run / "cfg.json";
  cslam::write_file(cfg, "{\"scenario\": \"aliasing\", \"seed\": 3}");
  const Result r = cli("generate --config " + quoted(cfg) + " --seed 4 --out " + quoted(run / "out"));
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string saved = cslam::read_file(run / "out" / "run_config.json");
  EXPECT_NE(saved.find("\"aliasing\""), std::string::npos) << saved;
  EXPECT_NE(saved.find("\"seed\": 4"), std::string::npos) << saved;
  EXPECT_EQ(r.output.find("agents: 3"), std::string::npos);
}
