// Command-line front end: each subcommand runs one named scenario (fig4 runs
// both halves) and writes its tables plus a checksummed manifest under
// <out>/<scenario>/.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nvmet/harness.hpp"

namespace {

using nvmet::harness::ScenarioConfig;
using nvmet::harness::ScenarioResult;

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> noise;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<int> seeds;
  std::optional<double> phi_deg;
  bool paper_scale = false;
  bool no_shot_noise = false;
};

ScenarioConfig load_config(const CliOptions& options, const std::string& scenario) {
  std::map<std::string, std::string> keys;
  if (!options.config_path.empty()) {
    std::ifstream stream(options.config_path);
    if (!stream) {
      throw std::invalid_argument("cannot read config file '" + options.config_path + "'");
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    keys = nvmet::harness::parse_config_text(buffer.str());
  }
  ScenarioConfig config = ScenarioConfig::from_keys(keys);
  config.scenario = scenario;
  if (options.seed) config.seed = *options.seed;
  if (options.noise) config.noise = *options.noise;
  if (options.out_dir) config.out_dir = *options.out_dir;
  if (options.threads) config.threads = *options.threads;
  if (options.seeds) config.seeds = *options.seeds;
  if (options.phi_deg) config.phi_deg = *options.phi_deg;
  if (options.paper_scale) config.paper_scale = true;
  if (options.no_shot_noise) config.shot_noise = false;
  config.validate();
  return config;
}

void run_one(const CliOptions& options, const std::string& scenario) {
  ScenarioConfig config = load_config(options, scenario);
  ScenarioResult result = nvmet::harness::run_scenario(config);
  std::filesystem::path dir = std::filesystem::path(config.out_dir) / scenario;
  nvmet::harness::write_outputs(config, result, dir.string());
  std::cout << "wrote " << (dir / "manifest.txt").string() << "\n";
  for (const auto& [name, value] : result.metrics) {
    char line[160];
    std::snprintf(line, sizeof line, "  %s = %.9g\n", name.c_str(), value);
    std::cout << line;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nv-center phase-estimation scenario runner"};
  app.require_subcommand(1);
  app.fallthrough();

  CliOptions options;
  app.add_option("--config", options.config_path, "key = value configuration file");
  app.add_option("--seed", options.seed, "master random seed");
  app.add_option("--noise", options.noise, "noise preset")
      ->check(CLI::IsMember({"ideal", "paper"}));
  app.add_option("--out", options.out_dir, "output directory root");
  app.add_option("--threads", options.threads, "worker thread count");
  app.add_option("--seeds", options.seeds, "Monte-Carlo repetitions per point");
  app.add_option("--phi", options.phi_deg, "input phase in degrees");
  app.add_flag("--paper-scale", options.paper_scale, "full-size repeat budgets");
  app.add_flag("--no-shot-noise", options.no_shot_noise, "disable photon shot noise");

  std::vector<std::string> order;
  for (const std::string name : {"fig2f", "fig4", "supp-note2", "scaling", "tomo-demo"}) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->callback([&order, name]() { order.push_back(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    for (const std::string& name : order) {
      if (name == "fig4") {
        run_one(options, "fig4ab");
        run_one(options, "fig4cd");
      } else {
        run_one(options, name);
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
