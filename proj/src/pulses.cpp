#include "nvmet/pulses.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace nvmet::pulses {

void PulseSequence::append(const PulseSequence& other) {
  steps.insert(steps.end(), other.steps.begin(), other.steps.end());
}

double PulseSequence::total_duration_s() const {
  double total = 0.0;
  for (const auto& step : steps)
    std::visit([&](const auto& s) { total += s.duration_s; }, step);
  return total;
}

double PhaseConvention::prepare(double phi) { return phi + M_PI_2; }
double PhaseConvention::entangle(double phi) { return M_PI_2 - phi; }
double PhaseConvention::measure(double theta, bool mapped) {
  return mapped ? M_PI - theta : -theta;
}
double PhaseConvention::convert(double theta) { return theta + M_PI_2; }
double PhaseConvention::mapping() { return M_PI_2; }

void DriveSettings::validate() const {
  if (!(rf_rabi_hz > 0.0) || !(mw_rabi_hz > 0.0))
    throw std::invalid_argument("DriveSettings: Rabi frequencies must be positive");
  if (inter_pulse_gap_s < 0.0)
    throw std::invalid_argument("DriveSettings: negative inter-pulse gap");
}

double DriveSettings::rabi_for(Transition t) const {
  return nvmodel::is_electron_transition(t) ? mw_rabi_hz : rf_rabi_hz;
}

double DriveSettings::pi_duration_s(Transition t) const { return 0.5 / rabi_for(t); }

bool chain_is_mapped(Chain c) { return c != Chain::Electron; }

Transition chain_drive_transition(Chain c) {
  return c == Chain::Electron ? Transition::MwUp : Transition::Rf0;
}

namespace {

// every emitted pulse is followed by the configured free gap, so composed
// sequences also get one at each junction
void append_area_pulse(PulseSequence& seq, Transition t, double area_rad, double phase,
                       const DriveSettings& drive) {
  double rabi = drive.rabi_for(t);
  seq.append(Pulse{t, area_rad / (2.0 * M_PI * rabi), phase, rabi});
  if (drive.inter_pulse_gap_s > 0.0) seq.append(FreeGap{drive.inter_pulse_gap_s});
}

}  // namespace

PulseSequence prepare_single_nuclear(double phi, const DriveSettings& drive) {
  drive.validate();
  PulseSequence seq;
  append_area_pulse(seq, Transition::Rf0, M_PI_2, PhaseConvention::prepare(phi), drive);
  return seq;
}

PulseSequence prepare_single_electron(double phi, const DriveSettings& drive) {
  drive.validate();
  PulseSequence seq;
  append_area_pulse(seq, Transition::MwUp, M_PI_2, PhaseConvention::prepare(phi), drive);
  return seq;
}

PulseSequence prepare_entangled(double phi, const DriveSettings& drive) {
  drive.validate();
  PulseSequence seq;
  append_area_pulse(seq, Transition::Rf0, M_PI_2, PhaseConvention::prepare(phi), drive);
  append_area_pulse(seq, Transition::MwUp, M_PI, PhaseConvention::entangle(phi), drive);
  return seq;
}

PulseSequence mapping_gate(double efficiency, const DriveSettings& drive) {
  drive.validate();
  if (!(efficiency > 0.0) || efficiency > 1.0)
    throw std::invalid_argument("mapping_gate: efficiency must be in (0, 1]");
  // rotation area with transfer probability sin^2(area/2) = efficiency
  double area = 2.0 * std::asin(std::sqrt(efficiency));
  PulseSequence seq;
  append_area_pulse(seq, Transition::MwUp, area, PhaseConvention::mapping(), drive);
  return seq;
}

PulseSequence rabi_block(Transition t, double drive_phase, double duration_s,
                         const DriveSettings& drive) {
  drive.validate();
  if (duration_s < 0.0) throw std::invalid_argument("rabi_block: negative duration");
  PulseSequence seq;
  seq.append(Pulse{t, duration_s, drive_phase, drive.rabi_for(t)});
  return seq;
}

PulseSequence measurement_sequence(Chain chain, double theta, double duration_s,
                                   const DriveSettings& drive, double mapping_efficiency) {
  drive.validate();
  PulseSequence seq;
  auto drive_then_gap = [&](Transition t, double phase) {
    seq.append(rabi_block(t, phase, duration_s, drive));
    if (drive.inter_pulse_gap_s > 0.0) seq.append(FreeGap{drive.inter_pulse_gap_s});
  };
  switch (chain) {
    case Chain::Nuclear:
      drive_then_gap(Transition::Rf0, PhaseConvention::measure(theta, true));
      seq.append(mapping_gate(mapping_efficiency, drive));
      break;
    case Chain::Electron:
      drive_then_gap(Transition::MwUp, PhaseConvention::measure(theta, false));
      break;
    case Chain::Entangled:
      // the conversion pulse carries theta; the RF drive axis stays fixed so
      // the analysis phase enters the signal exactly once
      append_area_pulse(seq, Transition::MwUp, M_PI, PhaseConvention::convert(theta), drive);
      drive_then_gap(Transition::Rf0, 0.0);
      seq.append(mapping_gate(mapping_efficiency, drive));
      break;
  }
  return seq;
}

qcore::DensityMatrix simulate(const PulseSequence& seq, const nvmodel::SystemParams& sys,
                              const nvmodel::NoiseParams& noise) {
  return simulate_from(nvmodel::initial_state(noise), seq, sys, noise);
}

qcore::DensityMatrix simulate_from(qcore::DensityMatrix state, const PulseSequence& seq,
                                   const nvmodel::SystemParams& sys,
                                   const nvmodel::NoiseParams& noise) {
  for (const auto& step : seq.steps) {
    if (const Pulse* p = std::get_if<Pulse>(&step)) {
      nvmodel::DriveGenerator gen = nvmodel::drive_generator(sys, p->transition, p->phase_rad,
                                                             p->rabi_hz);
      state = nvmodel::evolve_pulse(state, gen, p->duration_s, noise);
    } else {
      state = nvmodel::evolve_free(state, std::get<FreeGap>(step).duration_s, noise);
    }
  }
  return state;
}

std::string serialize_sequence(const PulseSequence& seq) {
  std::string out;
  char line[160];
  for (const auto& step : seq.steps) {
    if (const Pulse* p = std::get_if<Pulse>(&step)) {
      std::snprintf(line, sizeof(line), "pulse %s %.17g %.17g %.17g\n",
                    nvmodel::transition_name(p->transition), p->duration_s, p->phase_rad,
                    p->rabi_hz);
    } else {
      std::snprintf(line, sizeof(line), "gap %.17g\n", std::get<FreeGap>(step).duration_s);
    }
    out += line;
  }
  return out;
}

PulseSequence parse_sequence(const std::string& text) {
  PulseSequence seq;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "pulse") {
      std::string name;
      Pulse p;
      if (!(fields >> name >> p.duration_s >> p.phase_rad >> p.rabi_hz))
        throw std::invalid_argument("parse_sequence: malformed pulse at line " +
                                    std::to_string(line_no));
      p.transition = nvmodel::transition_from_name(name);
      seq.append(p);
    } else if (tag == "gap") {
      FreeGap g;
      if (!(fields >> g.duration_s))
        throw std::invalid_argument("parse_sequence: malformed gap at line " +
                                    std::to_string(line_no));
      seq.append(g);
    } else {
      throw std::invalid_argument("parse_sequence: unknown step '" + tag + "' at line " +
                                  std::to_string(line_no));
    }
  }
  return seq;
}

}  // namespace nvmet::pulses
