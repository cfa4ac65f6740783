#pragma once

// Information-theoretic references: classical Fisher information of a POVM on
// a phase-parameterized state family, pure-state quantum Fisher information,
// the Cramer-Rao bound, and the standard-quantum-limit / Heisenberg scaling
// table for small probe registers.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nvmet/qcore.hpp"

namespace nvmet::infotheory {

inline constexpr double kDefaultStep = 1e-5;        // central-difference step, radians
inline constexpr double kProbabilityFloor = 1e-12;  // outcomes below this are dropped

struct StateFamily {
  std::function<qcore::DensityMatrix(double)> evaluate;  // phi -> state
  int dim = 0;
  // optional analytic d rho / d phi; when absent, derivatives fall back to a
  // step-halving central difference
  std::function<qcore::ComplexMatrix(double)> derivative;

  bool has_analytic_derivative() const { return static_cast<bool>(derivative); }
};

struct PureFamily {
  std::function<qcore::ComplexVector(double)> evaluate;  // phi -> normalized amplitudes
  int dim = 0;
};

struct CrbReport {
  double fisher = 0.0;  // 1/radians^2
  double qfi = 0.0;     // 1/radians^2
  double bound = 0.0;   // radians, 1/sqrt(nu * fisher)
  std::uint64_t nu = 0;

  void validate() const;  // 0 <= fisher <= qfi + 1e-8, bound finite and positive
};

// Classical Fisher information sum p'(xi)^2 / p(xi) of the POVM outcomes.
// Derivatives are central differences at dphi and dphi/2; disagreement beyond
// 1e-4 relative means the family is not smooth enough and raises an error.
// Outcomes with probability under the floor are dropped.
double fisher_information(const StateFamily& family, const qcore::Povm& povm, double phi,
                          double dphi = kDefaultStep);

// Pure-state quantum Fisher information 4(<dpsi|dpsi> - |<psi|dpsi>|^2) with
// the same step-halving derivative check. Every evaluated state must be
// normalized within 1e-10.
double qfi_pure(const PureFamily& family, double phi, double dphi = kDefaultStep);

// Cramer-Rao bound 1/sqrt(nu F) in radians; fisher must be positive
double crb(double fisher, std::uint64_t nu);

CrbReport crb_report(double fisher, double qfi, std::uint64_t nu);

// N-qubit probe registers accumulating phase on each excited qubit:
// Separable is the product of single-qubit superpositions (QFI = N), Ghz the
// two-branch maximally entangled register (QFI = N^2). Limited to 4 qubits.
enum class Probe { Separable, Ghz };

const char* probe_name(Probe kind);

PureFamily probe_family(int n_qubits, Probe kind);

// density-matrix view of a pure family
StateFamily as_density_family(const PureFamily& family);

struct ScalingRow {
  int n_qubits = 0;
  double qfi = 0.0;
  double bound = 0.0;  // crb(qfi, nu) at the table's repeat budget
};

// One row per register size 1..n_max with the numerically evaluated QFI,
// cross-checked against the closed form (N or N^2) within 1e-6 relative.
std::vector<ScalingRow> scaling_table(int n_max, Probe kind, std::uint64_t nu = 1);

std::string serialize_scaling_table(const std::vector<ScalingRow>& rows);

}  // namespace nvmet::infotheory
