#pragma once

// Two-qubit state tomography built on the working transitions 0<->1 (RF) and
// 0<->2, 1<->3 (MW). Each off-diagonal element is read out as the sine
// quadrature of a Rabi oscillation at drive phases 0 and 90 degrees; elements
// outside the working transitions are first moved there by pi transfer
// pulses. Diagonals come from the cosine quadratures, which measure the
// population difference of every driven pair.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvmet/nvmodel.hpp"
#include "nvmet/pulses.hpp"
#include "nvmet/qcore.hpp"
#include "nvmet/readout.hpp"

namespace nvmet::tomo {

enum class Component { Real, Imag };

const char* component_name(Component c);

struct TomoEntry {
  nvmodel::Transition working;     // transition whose Rabi drive is fitted
  pulses::PulseSequence prefix;    // transfer pi pulses, possibly empty
  double drive_phase_rad = 0.0;    // 0 or pi/2
  int row = 0;                     // target element rho(row, col)
  int col = 0;
  qcore::Complex transfer{1.0, 0.0};  // measured coherence = transfer * rho(row, col)
  Component component = Component::Imag;  // target-element quadrature this entry pins

  bool needs_mapping() const { return working == nvmodel::Transition::Rf0; }
};

struct TomographySchedule {
  std::vector<TomoEntry> entries;

  // 12 entries, each off-diagonal element twice with both drive phases and
  // both components, unit-modulus transfer factors, direct elements bare and
  // indirect ones carrying at least one transfer pulse
  void validate() const;
};

TomographySchedule build_schedule(const pulses::DriveSettings& drive = {});

struct TomoParams {
  nvmodel::SystemParams sys;
  nvmodel::NoiseParams noise;
  readout::ReadoutModel readout;
  pulses::DriveSettings drive;
  int points_per_trace = 192;  // one full Rabi period from t = 0
  int blocks = 10;
  bool shot_noise = true;

  static TomoParams ideal();      // no decoherence, perfect transfer, shot noise on
  static TomoParams noiseless();  // ideal with shot noise off as well
  void validate() const;
};

struct TomographyResult {
  qcore::DensityMatrix state;   // PSD-projected reconstruction
  qcore::ComplexMatrix raw;     // Hermitian estimate before projection
  std::optional<double> fidelity;  // vs the supplied target
};

// Hermitize, clip negative eigenvalues to zero, renormalize the trace to one.
// Idempotent; a valid density matrix passes through unchanged.
qcore::DensityMatrix project_psd(const qcore::ComplexMatrix& m);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
double fidelity(const qcore::DensityMatrix& a, const qcore::DensityMatrix& b);

// Tomograph the state an explicit preparation leaves behind. nu is the
// repeat budget per trace point; every schedule entry is simulated through
// the pulse and readout models.
TomographyResult run_tomography_state(const qcore::DensityMatrix& prepared, std::uint64_t nu,
                                      std::uint64_t seed, const TomoParams& params,
                                      const std::optional<qcore::DensityMatrix>& target = {});

// Same, preparing the state from the sequence first. nu >= 1e4.
TomographyResult run_tomography(const pulses::PulseSequence& prep, std::uint64_t nu,
                                std::uint64_t seed, const TomoParams& params,
                                const std::optional<qcore::DensityMatrix>& target = {});

std::string serialize_schedule(const TomographySchedule& schedule);

// real/imag element table, one "row col re im" line per element
std::string serialize_components(const qcore::ComplexMatrix& m);

}  // namespace nvmet::tomo
