#include "nvmet/experiment.hpp"

#include <stdexcept>

namespace nvmet::experiment {

const char* kind_name(ProbeKind kind) {
  return kind == ProbeKind::Single ? "single" : "entangled";
}

ProbeKind kind_from_name(const std::string& name) {
  if (name == "single") return ProbeKind::Single;
  if (name == "entangled") return ProbeKind::Entangled;
  throw std::invalid_argument("unknown probe kind: " + name);
}

ExperimentModel ExperimentModel::ideal() {
  ExperimentModel model;
  model.noise = nvmodel::NoiseParams::ideal();
  return model;
}

ExperimentModel ExperimentModel::noiseless() {
  ExperimentModel model = ideal();
  model.shot_noise = false;
  return model;
}

void ExperimentModel::validate() const {
  sys.validate();
  noise.validate();
  readout.validate();
  drive.validate();
  if (trace_points < 8) throw std::invalid_argument("trace_points must be at least 8");
  if (!(trace_periods >= 1.0)) {
    throw std::invalid_argument("a trace must span at least one Rabi period");
  }
  if (blocks < 2) throw std::invalid_argument("blocks must be at least 2");
  if (!(systematic_phase_sd_deg >= 0.0)) {
    throw std::invalid_argument("systematic_phase_sd_deg must be non-negative");
  }
}

std::vector<pulses::Chain> chains_for(ProbeKind kind) {
  if (kind == ProbeKind::Single) return {pulses::Chain::Nuclear, pulses::Chain::Electron};
  return {pulses::Chain::Entangled};
}

std::uint64_t repeats_per_point(const ExperimentModel& model, std::uint64_t nu) {
  if (model.accounting == Accounting::PerPoint) return nu;
  std::uint64_t per_point = nu / static_cast<std::uint64_t>(model.trace_points);
  if (per_point < 1) throw std::invalid_argument("nu too small for per-trace accounting");
  return per_point;
}

std::vector<double> trace_durations(const ExperimentModel& model, pulses::Chain chain) {
  double period = 1.0 / model.drive.rabi_for(pulses::chain_drive_transition(chain));
  double step = model.trace_periods * period / static_cast<double>(model.trace_points);
  std::vector<double> out(static_cast<std::size_t>(model.trace_points));
  for (int i = 0; i < model.trace_points; ++i) {
    out[static_cast<std::size_t>(i)] = 0.25 * period + i * step;
  }
  return out;
}

readout::StateFamily state_family(const ExperimentModel& model, pulses::Chain chain,
                                  double phi, double theta) {
  model.validate();
  pulses::PulseSequence prep;
  switch (chain) {
    case pulses::Chain::Nuclear:
      prep = pulses::prepare_single_nuclear(phi, model.drive);
      break;
    case pulses::Chain::Electron:
      prep = pulses::prepare_single_electron(phi, model.drive);
      break;
    case pulses::Chain::Entangled:
      prep = pulses::prepare_entangled(phi, model.drive);
      break;
  }
  qcore::DensityMatrix prepared = pulses::simulate(prep, model.sys, model.noise);
  return [model, chain, theta, prepared](double duration) {
    pulses::PulseSequence readout_seq = pulses::measurement_sequence(
        chain, theta, duration, model.drive, model.noise.mapping_gate_efficiency);
    return pulses::simulate_from(prepared, readout_seq, model.sys, model.noise);
  };
}

std::vector<double> expected_curve(const ExperimentModel& model, pulses::Chain chain,
                                   double phi, double theta) {
  readout::StateFamily family = state_family(model, chain, phi, theta);
  std::vector<double> durations = trace_durations(model, chain);
  std::vector<double> out;
  out.reserve(durations.size());
  for (double t : durations) out.push_back(readout::expected_ratio(family(t), model.readout));
  return out;
}

}  // namespace nvmet::experiment
