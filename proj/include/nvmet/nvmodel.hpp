#pragma once

// Four-level electron+nuclear register: the fixed basis is
//   0 = |0,up>, 1 = |0,down>, 2 = |1,up>, 3 = |1,down>
// (electron m_S = 0 / -1 written 0/1, nuclear spin up/down), so
// index = 2*electron + nuclear. Every module relies on this ordering.

#include "nvmet/qcore.hpp"

#include <limits>
#include <string>

namespace nvmet::nvmodel {

enum class Transition { MwUp, MwDown, Rf0, Rf1 };

struct Levels {
  int lo;
  int hi;
};

// MwUp: 0<->2, MwDown: 1<->3, Rf0: 0<->1, Rf1: 2<->3
Levels transition_levels(Transition t);
bool is_electron_transition(Transition t);
const char* transition_name(Transition t);
Transition transition_from_name(const std::string& name);

struct SystemParams {
  double zero_field_splitting_hz = 2.87e9;
  double hyperfine_coupling_hz = 12.8e6;
  double nuclear_resonance_ms0_hz = 495e3;
  double nuclear_larmor_hz = 542e3;
  double magnetic_field_gauss = 507.0;  // informational only
  // set false to allow drives past the 20%-of-gap selectivity guard
  bool enforce_selectivity = true;

  void validate() const;
  // narrowest frequency scale protecting the transition from off-resonant
  // driving: the hyperfine splitting for MW and RF1, the ms=0 nuclear
  // resonance for RF0
  double selectivity_gap_hz(Transition t) const;
};

constexpr double kInfTime = std::numeric_limits<double>::infinity();

struct NoiseParams {
  double t2_star_electron_s = 0.72e-6;
  double t2_star_nuclear_ms0_s = 270e-6;
  double t2_star_nuclear_ms1_s = 212e-6;
  double t1_electron_s = 5e-3;
  double t1rho_nuclear_s = 1.3e-3;
  double t1rho_electron_s = kInfTime;  // never quantified; off by default
  double mapping_gate_efficiency = 0.92;
  double nuclear_init_polarization = 0.85;
  double electron_init_polarization = 1.0;

  // all decay channels off, perfect initialization and transfer
  static NoiseParams ideal();
  void validate() const;
};

// independent product of the two polarized spins, diagonal by construction
qcore::DensityMatrix initial_state(const NoiseParams& noise);

struct DriveGenerator {
  qcore::ComplexMatrix matrix;  // 4x4 Hermitian, entries in Hz
  Transition transition;
  double rabi_hz;
};

// Rotating-frame generator with (rabi/2)e^{-i phase} at (lo,hi) and its
// conjugate at (hi,lo), zeros elsewhere. U(t) = exp(-i 2pi gen t), so a
// duration of 1/(2 rabi) is a pi pulse.
DriveGenerator drive_generator(const SystemParams& sys, Transition t, double phase_rad,
                               double rabi_hz);

// Unitary drive evolution composed with driven-envelope decay (T1rho of the
// driven species, acting between dressed states), dephasing of the undriven
// species, and electron T1 relaxation.
qcore::DensityMatrix evolve_pulse(const qcore::DensityMatrix& state, const DriveGenerator& gen,
                                  double duration_s, const NoiseParams& noise);

// Free precession on resonance: Gaussian-envelope dephasing
// (electron exp(-(t/T2e*)^2), nuclear per-branch exp(-(t/T2n*)^2)) plus
// electron T1 relaxation toward |0>.
qcore::DensityMatrix evolve_free(const qcore::DensityMatrix& state, double duration_s,
                                 const NoiseParams& noise);

}  // namespace nvmet::nvmodel
