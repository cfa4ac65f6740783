#include "nvmet/readout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "nvmet/rng.hpp"

namespace nvmet::readout {

void ReadoutModel::validate() const {
  if (!(bright_rate_cps > 0.0)) throw std::invalid_argument("bright_rate_cps must be positive");
  if (!(window_s > 0.0)) throw std::invalid_argument("window_s must be positive");
  if (!(contrast > 0.0 && contrast < 1.0)) {
    throw std::invalid_argument("contrast must lie strictly between 0 and 1");
  }
  if (!(reference_delay_s >= 0.0)) {
    throw std::invalid_argument("reference_delay_s must be non-negative");
  }
}

double normalized_ratio(const ShotRecord& record) {
  if (record.signal_counts < 0 || record.reference_counts < 0) {
    throw std::invalid_argument("photon counts must be non-negative");
  }
  return static_cast<double>(record.signal_counts) /
         static_cast<double>(std::max<std::int64_t>(record.reference_counts, 1));
}

void RabiTrace::validate() const {
  if (durations_s.size() != means.size() || durations_s.size() != sds.size()) {
    throw std::invalid_argument("trace columns must have equal lengths");
  }
  if (nu < 1) throw std::invalid_argument("nu must be at least 1");
  if (blocks < 1) throw std::invalid_argument("blocks must be at least 1");
}

double expected_ratio(const qcore::DensityMatrix& state, const ReadoutModel& model) {
  model.validate();
  double p0 = state.population(0) + state.population(1);
  return 1.0 - model.contrast * (1.0 - p0);
}

ShotRecord sample_shots(const qcore::DensityMatrix& state, const ReadoutModel& model,
                        std::uint64_t nu, std::uint64_t seed) {
  if (nu < 1) throw std::invalid_argument("nu must be at least 1");
  double mean_photons = static_cast<double>(nu) * model.photons_per_shot();
  double ratio = expected_ratio(state, model);
  rng::Xoshiro256ss stream(seed);
  ShotRecord record;
  record.signal_counts = static_cast<std::int64_t>(rng::poisson(stream, mean_photons * ratio));
  record.reference_counts = static_cast<std::int64_t>(rng::poisson(stream, mean_photons));
  return record;
}

RabiTrace measure_trace(const std::vector<double>& durations_s, const StateFamily& family,
                        const ReadoutModel& model, std::uint64_t nu, int blocks,
                        std::uint64_t seed, bool shot_noise) {
  model.validate();
  if (durations_s.size() < 8) {
    throw std::invalid_argument("a trace needs at least 8 duration samples");
  }
  for (std::size_t i = 1; i < durations_s.size(); ++i) {
    if (!(durations_s[i] > durations_s[i - 1])) {
      throw std::invalid_argument("durations must be strictly increasing");
    }
  }
  if (blocks < 2) throw std::invalid_argument("SD across blocks needs at least 2 blocks");
  if (nu < static_cast<std::uint64_t>(blocks)) {
    throw std::invalid_argument("nu must cover every block with at least one repeat");
  }

  RabiTrace trace;
  trace.durations_s = durations_s;
  trace.nu = nu;
  trace.blocks = blocks;
  trace.means.resize(durations_s.size());
  trace.sds.resize(durations_s.size());

  std::uint64_t base = nu / static_cast<std::uint64_t>(blocks);
  std::uint64_t extra = nu % static_cast<std::uint64_t>(blocks);

  for (std::size_t i = 0; i < durations_s.size(); ++i) {
    qcore::DensityMatrix state = family(durations_s[i]);
    if (!shot_noise) {
      trace.means[i] = expected_ratio(state, model);
      trace.sds[i] = 0.0;
      continue;
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int b = 0; b < blocks; ++b) {
      std::uint64_t nu_block = base + (static_cast<std::uint64_t>(b) < extra ? 1 : 0);
      std::uint64_t block_seed = rng::derive(
          seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(b)});
      double ratio = normalized_ratio(sample_shots(state, model, nu_block, block_seed));
      sum += ratio;
      sum_sq += ratio * ratio;
    }
    double inv_b = 1.0 / static_cast<double>(blocks);
    double mean = sum * inv_b;
    double var = (sum_sq - sum * sum * inv_b) / static_cast<double>(blocks - 1);
    trace.means[i] = mean;
    trace.sds[i] = std::sqrt(std::max(var, 0.0));
  }
  return trace;
}

std::string serialize_trace(const RabiTrace& trace) {
  trace.validate();
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "# nu %llu blocks %d\n",
                static_cast<unsigned long long>(trace.nu), trace.blocks);
  out += line;
  out += "# duration_s\tmean\tsd\n";
  for (std::size_t i = 0; i < trace.durations_s.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g\t%.17g\t%.17g\n", trace.durations_s[i],
                  trace.means[i], trace.sds[i]);
    out += line;
  }
  return out;
}

RabiTrace parse_trace(const std::string& text) {
  RabiTrace trace;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      if (hs >> key && key == "nu") {
        unsigned long long nu_val = 0;
        std::string blocks_key;
        if (!(hs >> nu_val >> blocks_key >> trace.blocks) || blocks_key != "blocks") {
          throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                      ": malformed nu/blocks header");
        }
        trace.nu = nu_val;
        have_header = true;
      }
      continue;
    }
    std::istringstream row(line);
    double t = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    if (!(row >> t >> mean >> sd)) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                  ": expected duration, mean, sd");
    }
    trace.durations_s.push_back(t);
    trace.means.push_back(mean);
    trace.sds.push_back(sd);
  }
  if (!have_header) throw std::invalid_argument("trace text lacks the nu/blocks header");
  trace.validate();
  return trace;
}

}  // namespace nvmet::readout
