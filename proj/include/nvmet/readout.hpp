#pragma once

// Spin-dependent fluorescence readout: photon counting statistics for the
// signal/reference two-window scheme and repeat-block Rabi traces.
//
// A single repeat yields far less than one photon on average, so nu repeats
// are pooled into one Poisson draw per window (the sum of independent Poisson
// counts is Poisson in the summed mean, exactly).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nvmet/qcore.hpp"

namespace nvmet::readout {

struct ReadoutModel {
  double bright_rate_cps = 250e3;   // fluorescence rate of electron |0>
  double window_s = 300e-9;         // counting window per repeat
  double contrast = 0.30;           // relative dip of the electron |1> rate
  double reference_delay_s = 1e-6;  // re-polarizing gap before the reference window

  // mean photons per repeat at normalized ratio 1
  double photons_per_shot() const { return bright_rate_cps * window_s; }

  void validate() const;
};

struct ShotRecord {
  std::int64_t signal_counts = 0;
  std::int64_t reference_counts = 0;
};

// signal normalized by reference; the reference window is clamped to one
// count so an empty denominator cannot occur
double normalized_ratio(const ShotRecord& record);

struct RabiTrace {
  std::vector<double> durations_s;
  std::vector<double> means;  // per-point block-averaged normalized ratio
  std::vector<double> sds;    // per-point SD across repeat blocks
  std::uint64_t nu = 0;       // total repeats per point
  int blocks = 0;

  void validate() const;
};

// expected normalized ratio 1 - contrast * (1 - p0), where p0 is the
// electron |0> population (levels 0 and 1); affine in p0
double expected_ratio(const qcore::DensityMatrix& state, const ReadoutModel& model);

// Poisson photon counts for nu pooled repeats of one state: signal mean
// nu * rate * window * expected_ratio, reference mean nu * rate * window.
// Deterministic per (state, model, nu, seed).
ShotRecord sample_shots(const qcore::DensityMatrix& state, const ReadoutModel& model,
                        std::uint64_t nu, std::uint64_t seed);

// state reached after driving for a given duration
using StateFamily = std::function<qcore::DensityMatrix(double)>;

// Samples a Rabi trace: for each duration, `blocks` independent acquisitions
// of nu/blocks repeats each (remainder spread over the leading blocks), with
// per-point means and across-block SDs. Durations must be at least 8 strictly
// increasing samples and should span a full Rabi period for downstream fits.
// Per-block streams are derived from (seed, point, block), so results do not
// depend on evaluation order. With shot_noise false the means are the exact
// expected ratios and the SDs are zero.
RabiTrace measure_trace(const std::vector<double>& durations_s, const StateFamily& family,
                        const ReadoutModel& model, std::uint64_t nu, int blocks,
                        std::uint64_t seed, bool shot_noise = true);

// text table: comment header with nu and blocks, then one
// "duration<TAB>mean<TAB>sd" row per point
std::string serialize_trace(const RabiTrace& trace);
RabiTrace parse_trace(const std::string& text);

}  // namespace nvmet::readout
