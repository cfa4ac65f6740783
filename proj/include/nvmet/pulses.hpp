#pragma once

#include "nvmet/nvmodel.hpp"
#include "nvmet/qcore.hpp"

#include <string>
#include <variant>
#include <vector>

namespace nvmet::pulses {

using nvmodel::Transition;

struct Pulse {
  Transition transition;
  double duration_s = 0.0;
  double phase_rad = 0.0;
  double rabi_hz = 0.0;
};

struct FreeGap {
  double duration_s = 0.0;
};

using SequenceStep = std::variant<Pulse, FreeGap>;

struct PulseSequence {
  std::vector<SequenceStep> steps;

  void append(const Pulse& p) { steps.push_back(p); }
  void append(const FreeGap& g) { steps.push_back(g); }
  void append(const PulseSequence& other);
  double total_duration_s() const;
};

// Single source of truth for how logical phases map onto drive phases. A
// drive of phase q rotates the Bloch vector about (cos q, sin q, 0), and a
// pi pulse sends |lo> to -i e^{+iq}|hi>. Under these functions:
//   - prepare_* leaves the state coherence rho(hi, lo) with argument
//     exactly phi (single) or rho(0 down, 1 up) with argument 2 phi
//     (entangled),
//   - every measurement chain produces a signal whose signed amplitude is
//     k sin(Phi + theta) with k > 0, so atan2(A_0, A_90) recovers Phi.
// Chains that end with the mapping gate read an inverted population, which
// the pi - theta form absorbs.
struct PhaseConvention {
  static double prepare(double phi);                    // phi + pi/2
  static double entangle(double phi);                   // pi/2 - phi
  static double measure(double theta, bool mapped);     // -theta, or pi - theta
  static double convert(double theta);                  // theta + pi/2
  static double mapping();                              // pi/2
};

struct DriveSettings {
  double rf_rabi_hz = 50e3;
  double mw_rabi_hz = 2e6;
  double inter_pulse_gap_s = 0.0;

  void validate() const;
  double rabi_for(Transition t) const;
  double pi_duration_s(Transition t) const;  // 1/(2 rabi)
};

// readout chains for the two probe kinds; Single combines Nuclear+Electron
enum class Chain { Nuclear, Electron, Entangled };

bool chain_is_mapped(Chain c);
// transition whose Rabi drive produces the measured oscillation
Transition chain_drive_transition(Chain c);

// RF0 pi/2 pulse leaving the nuclear coherence at argument phi
PulseSequence prepare_single_nuclear(double phi, const DriveSettings& drive = {});
// MW pi/2 pulse leaving the electron coherence at argument phi
PulseSequence prepare_single_electron(double phi, const DriveSettings& drive = {});
// RF0 pi/2 then selective MW pi: coherence argument 2 phi between
// |1 up> and |0 down>
PulseSequence prepare_entangled(double phi, const DriveSettings& drive = {});
// selective MW pi transferring nuclear population to the electron; an
// efficiency below 1 is an under-rotation with transfer probability eta
PulseSequence mapping_gate(double efficiency = 1.0, const DriveSettings& drive = {});
// single Rabi drive pulse of the given phase and duration
PulseSequence rabi_block(Transition t, double drive_phase, double duration_s,
                         const DriveSettings& drive = {});

// Everything after preparation for one trace point: the chain's Rabi drive
// of length t at analysis phase theta, plus conversion/mapping pulses as the
// chain requires. Appending this to prepare_* gives the state that is read
// out optically.
PulseSequence measurement_sequence(Chain chain, double theta, double duration_s,
                                   const DriveSettings& drive, double mapping_efficiency);

// left-to-right composition of initial_state, evolve_pulse and evolve_free
qcore::DensityMatrix simulate(const PulseSequence& seq, const nvmodel::SystemParams& sys,
                              const nvmodel::NoiseParams& noise);
// same composition from an explicit starting state
qcore::DensityMatrix simulate_from(qcore::DensityMatrix state, const PulseSequence& seq,
                                   const nvmodel::SystemParams& sys,
                                   const nvmodel::NoiseParams& noise);

// line-oriented text form: "pulse <transition> <duration> <phase> <rabi>" or
// "gap <duration>", one step per line, full double precision
std::string serialize_sequence(const PulseSequence& seq);
PulseSequence parse_sequence(const std::string& text);

}  // namespace nvmet::pulses
