#pragma once

// Scenario description shared by the estimation pipeline and the harness:
// which probe is run, how repeats are accounted, trace geometry, and the
// physics/readout parameter sets bundled into one model object.

#include <cstdint>
#include <string>
#include <vector>

#include "nvmet/nvmodel.hpp"
#include "nvmet/pulses.hpp"
#include "nvmet/readout.hpp"

namespace nvmet::experiment {

// Single runs the two independent one-spin probes (nuclear and electron);
// Entangled runs the two-spin probe whose coherence accumulates twice the
// phase. Both consume the same two-qubit repeat budget per point.
enum class ProbeKind { Single, Entangled };

// PerPoint: nu repeats at every trace point (trace cost = points * nu).
// PerTrace: nu repeats split evenly across the trace points.
enum class Accounting { PerPoint, PerTrace };

const char* kind_name(ProbeKind kind);
ProbeKind kind_from_name(const std::string& name);

struct ExperimentModel {
  nvmodel::SystemParams sys;
  nvmodel::NoiseParams noise;  // defaults to the hardware-calibrated preset
  readout::ReadoutModel readout;
  pulses::DriveSettings drive;

  int trace_points = 24;
  double trace_periods = 2.0;  // Rabi periods spanned by one trace
  int blocks = 10;
  bool shot_noise = true;
  Accounting accounting = Accounting::PerPoint;

  // slow synchronization drift of the reference phase, applied as one
  // Gaussian offset per estimate (systematic within a run)
  double systematic_phase_sd_deg = 0.0;

  // decoherence-free parameters with photon shot noise kept on
  static ExperimentModel ideal();
  // ideal parameters and analytic traces (no sampling at all)
  static ExperimentModel noiseless();

  void validate() const;
};

// chains a probe kind executes
std::vector<pulses::Chain> chains_for(ProbeKind kind);

// repeats at one trace point under the model's accounting mode
std::uint64_t repeats_per_point(const ExperimentModel& model, std::uint64_t nu);

// Drive-duration grid: trace_points samples starting at a quarter period,
// stepping by trace_periods/trace_points of a period. Starting on the
// quadrature point puts the first sample at the oscillation's zero crossing,
// so a fit clocked from the first sample sees a pure offset cosine.
std::vector<double> trace_durations(const ExperimentModel& model, pulses::Chain chain);

// final pre-readout state as a function of the analysis drive duration
readout::StateFamily state_family(const ExperimentModel& model, pulses::Chain chain,
                                  double phi, double theta);

// expected normalized readout ratio over the duration grid (no sampling)
std::vector<double> expected_curve(const ExperimentModel& model, pulses::Chain chain,
                                   double phi, double theta);

}  // namespace nvmet::experiment
