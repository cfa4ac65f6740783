#pragma once

// Scenario runner: named desk-scale experiment reproductions with plain-text
// configuration, deterministic seed fan-out over a worker pool, tabular
// output files, and a checksummed run manifest.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nvmet/estimate.hpp"
#include "nvmet/experiment.hpp"

namespace nvmet::harness {

inline constexpr const char* kVersion = "1.0.0";

// "key = value" lines; '#' starts a comment; blank lines ignored; repeated
// keys keep the last value
std::map<std::string, std::string> parse_config_text(const std::string& text);

struct ScenarioConfig {
  std::string scenario = "fig2f";  // fig2f|fig4ab|fig4cd|supp-note2|scaling|tomo-demo
  double phi_deg = 30.0;
  std::vector<double> phi_list_deg = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
  std::vector<std::uint64_t> nu_list;  // empty -> scenario default
  int seeds = 0;                       // 0 -> scenario default
  std::uint64_t seed = 1;
  std::string noise = "ideal";          // ideal|paper
  std::string accounting = "per-point";  // per-point|per-trace
  std::string out_dir = "out";
  bool shot_noise = true;
  bool paper_scale = false;  // full-size repeat budgets instead of desk scale
  int threads = 1;
  int n_max = 4;            // scaling-table register cap
  double floor_deg = 0.5;   // injected systematic floor for supp-note2
  double drift_deg = 0.0;   // systematic reference-phase drift sd

  // unknown keys are rejected; values must parse for their type
  static ScenarioConfig from_keys(const std::map<std::string, std::string>& keys);

  void validate() const;
  experiment::ExperimentModel model() const;
  std::vector<std::uint64_t> effective_nu() const;
  int effective_seeds() const;
  std::string render() const;  // deterministic key=value snapshot
};

struct OutputFile {
  std::string name;
  std::string text;
};

struct ScenarioResult {
  std::string scenario;
  std::vector<OutputFile> files;
  std::map<std::string, double> metrics;
};

std::uint64_t fnv1a64(const std::string& data);

// config snapshot, toolkit version, and one checksum line per output file
std::string render_manifest(const ScenarioConfig& config, const ScenarioResult& result);

// writes every output file plus manifest.txt under dir (created if missing);
// returns the manifest text
std::string write_outputs(const ScenarioConfig& config, const ScenarioResult& result,
                          const std::string& dir);

// deterministic fan-out: body(i) for i in [0, n); results must be stored by
// index. The first exception thrown by any worker is rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

// phase and its standard deviation against the repeat budget at one input
// phase (single kind)
ScenarioResult run_fig2f(const ScenarioConfig& config);
// single vs entangled uncertainty curves over the budget sweep plus
// sd = a/sqrt(nu) + c fits and their ratio
ScenarioResult run_fig4ab(const ScenarioConfig& config);
// input-phase sweep at fixed budget: means, uncertainties, doubled raw phase
ScenarioResult run_fig4cd(const ScenarioConfig& config);
// the three alternative scaling fits on the fig4ab Monte-Carlo data, with a
// constant systematic floor injected and subtracted again
ScenarioResult run_supp_note2(const ScenarioConfig& config);
// quantum bound table for small registers plus the Monte-Carlo overlay
ScenarioResult run_scaling(const ScenarioConfig& config);
// tomography of the entangled preparation with component tables
ScenarioResult run_tomo_demo(const ScenarioConfig& config);

// dispatch on config.scenario
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace nvmet::harness
