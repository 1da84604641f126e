#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cslam/commands.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kFailure = 2 };

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  bool sweep = false;
  std::string out;
  std::string scenario;
};

// Precedence: flags, then the --config file, then run_config.json in the
// output directory, then defaults.
cslam::RunConfig resolve(const Flags& f) {
  cslam::RunConfig c;
  if (!f.config.empty()) {
    const std::filesystem::path p = f.config;
    c = cslam::config_from_text(cslam::read_file(p), p.parent_path());
  } else {
    const std::filesystem::path saved =
        cslam::RunLayout{f.out.empty() ? c.out_dir : std::filesystem::path(f.out)}.config();
    if (std::filesystem::exists(saved)) c = cslam::config_from_text(cslam::read_file(saved));
  }
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.scenario.empty()) c.scenario = f.scenario;
  if (f.seed) c.seed = *f.seed;
  if (f.alpha) c.pipeline.thresholds.alpha = *f.alpha;
  if (f.beta) c.pipeline.thresholds.beta = *f.beta;
  if (f.gamma) c.pipeline.thresholds.gamma = *f.gamma;
  cslam::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cslam: text and WiFi assisted multi-agent SLAM back end"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Run configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "Scenario seed");
    sub->add_option("--alpha", flags.alpha, "Text similarity threshold");
    sub->add_option("--beta", flags.beta, "MAC similarity threshold");
    sub->add_option("--gamma", flags.gamma, "RSS similarity threshold");
    sub->add_option("--out", flags.out, "Run directory");
    sub->add_option("--scenario", flags.scenario, "Scenario name");
  };
  CLI::App* generate = app.add_subcommand("generate", "Write the floor plan and agent scripts");
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate one recording per agent");
  CLI::App* match = app.add_subcommand("match", "Score candidate location pairs");
  CLI::App* align = app.add_subcommand("align", "Register matches and optimise the pose graph");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compute recognition metrics and end point error");
  CLI::App* run_all = app.add_subcommand("run-all", "Run every stage");
  for (CLI::App* sub : {generate, simulate, match, align, evaluate, run_all}) add_common(sub);
  for (CLI::App* sub : {evaluate, run_all}) {
    sub->add_flag("--sweep", flags.sweep, "Emit the full threshold grid");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  cslam::RunConfig config;
  try {
    config = resolve(flags);
  } catch (const cslam::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (generate->parsed()) {
      cslam::cmd_generate(config, std::cout);
    } else if (simulate->parsed()) {
      cslam::cmd_simulate(config, std::cout);
    } else if (match->parsed()) {
      cslam::cmd_match(config, std::cout);
    } else if (align->parsed()) {
      cslam::cmd_align(config, std::cout);
    } else if (evaluate->parsed()) {
      cslam::cmd_evaluate(config, flags.sweep, std::cout);
    } else {
      cslam::cmd_run_all(config, flags.sweep, std::cout);
    }
  } catch (const cslam::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
