#include "nvmet/nvmodel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace nvmet::nvmodel {

namespace {

using qcore::ComplexMatrix;
using qcore::DensityMatrix;
using qcore::KrausChannel;

const std::complex<double> kI(0.0, 1.0);

// gaussian decay factor exp(-(t/tau)^2), exact 1 when tau is infinite
double fid_factor(double t, double tau) {
  if (!std::isfinite(tau)) return 1.0;
  double x = t / tau;
  return std::exp(-x * x);
}

KrausChannel conjugated_multiplier(const Eigen::MatrixXd& mult, const ComplexMatrix& basis) {
  KrausChannel diag_channel = KrausChannel::from_multiplier(mult);
  std::vector<ComplexMatrix> ops;
  ops.reserve(diag_channel.ops().size());
  for (const auto& k : diag_channel.ops()) ops.push_back(basis * k * basis.adjoint());
  return KrausChannel(std::move(ops));
}

// Dephasing multiplier for independent Gaussian random phases per level:
// M_ij = exp(-Var(phase_i - phase_j)/2), a Gram matrix and hence PSD. The
// electron phase rides on levels 2,3; the nuclear-down phase on level 1
// (ms=0 rate) and level 3 (ms=-1 rate).
Eigen::MatrixXd free_dephasing_multiplier(double t, const NoiseParams& noise,
                                          bool include_electron) {
  double e = include_electron ? fid_factor(t, noise.t2_star_electron_s) : 1.0;
  double n0 = fid_factor(t, noise.t2_star_nuclear_ms0_s);
  double n1 = fid_factor(t, noise.t2_star_nuclear_ms1_s);
  Eigen::MatrixXd m(4, 4);
  m << 1.0, n0, e, e * n1,
      n0, 1.0, e * n0, e * n0 * n1,
      e, e * n0, 1.0, n1,
      e * n1, e * n0 * n1, n1, 1.0;
  return m;
}

Eigen::MatrixXd electron_only_multiplier(double t, const NoiseParams& noise) {
  double e = fid_factor(t, noise.t2_star_electron_s);
  Eigen::MatrixXd m(4, 4);
  m << 1.0, 1.0, e, e,
      1.0, 1.0, e, e,
      e, e, 1.0, 1.0,
      e, e, 1.0, 1.0;
  return m;
}

DensityMatrix apply_t1(const DensityMatrix& state, double t, const NoiseParams& noise) {
  if (!std::isfinite(noise.t1_electron_s)) return state;
  double gamma = 1.0 - std::exp(-t / noise.t1_electron_s);
  if (gamma <= 0.0) return state;
  double keep = std::sqrt(1.0 - gamma);
  ComplexMatrix k0 = ComplexMatrix::Identity(4, 4);
  k0(2, 2) = keep;
  k0(3, 3) = keep;
  ComplexMatrix k1 = ComplexMatrix::Zero(4, 4);
  k1(0, 2) = std::sqrt(gamma);
  k1(1, 3) = std::sqrt(gamma);
  return qcore::apply_channel(state, KrausChannel({k0, k1}));
}

}  // namespace

Levels transition_levels(Transition t) {
  switch (t) {
    case Transition::MwUp:
      return {0, 2};
    case Transition::MwDown:
      return {1, 3};
    case Transition::Rf0:
      return {0, 1};
    case Transition::Rf1:
      return {2, 3};
  }
  throw std::invalid_argument("transition_levels: unknown transition");
}

bool is_electron_transition(Transition t) {
  return t == Transition::MwUp || t == Transition::MwDown;
}

const char* transition_name(Transition t) {
  switch (t) {
    case Transition::MwUp:
      return "MW_UP";
    case Transition::MwDown:
      return "MW_DOWN";
    case Transition::Rf0:
      return "RF0";
    case Transition::Rf1:
      return "RF1";
  }
  throw std::invalid_argument("transition_name: unknown transition");
}

Transition transition_from_name(const std::string& name) {
  if (name == "MW_UP") return Transition::MwUp;
  if (name == "MW_DOWN") return Transition::MwDown;
  if (name == "RF0") return Transition::Rf0;
  if (name == "RF1") return Transition::Rf1;
  throw std::invalid_argument("transition_from_name: unknown transition '" + name + "'");
}

void SystemParams::validate() const {
  if (!(zero_field_splitting_hz > 0.0) || !(hyperfine_coupling_hz > 0.0) ||
      !(nuclear_resonance_ms0_hz > 0.0) || !(nuclear_larmor_hz > 0.0))
    throw std::invalid_argument("SystemParams: frequencies must be positive");
  if (hyperfine_coupling_hz / nuclear_resonance_ms0_hz <= 10.0)
    throw std::invalid_argument(
        "SystemParams: hyperfine coupling must exceed 10x the nuclear resonance");
}

double SystemParams::selectivity_gap_hz(Transition t) const {
  return t == Transition::Rf0 ? nuclear_resonance_ms0_hz : hyperfine_coupling_hz;
}

NoiseParams NoiseParams::ideal() {
  NoiseParams n;
  n.t2_star_electron_s = kInfTime;
  n.t2_star_nuclear_ms0_s = kInfTime;
  n.t2_star_nuclear_ms1_s = kInfTime;
  n.t1_electron_s = kInfTime;
  n.t1rho_nuclear_s = kInfTime;
  n.t1rho_electron_s = kInfTime;
  n.mapping_gate_efficiency = 1.0;
  n.nuclear_init_polarization = 1.0;
  n.electron_init_polarization = 1.0;
  return n;
}

void NoiseParams::validate() const {
  auto positive_time = [](double t) { return t > 0.0 && !std::isnan(t); };
  if (!positive_time(t2_star_electron_s) || !positive_time(t2_star_nuclear_ms0_s) ||
      !positive_time(t2_star_nuclear_ms1_s) || !positive_time(t1_electron_s) ||
      !positive_time(t1rho_nuclear_s) || !positive_time(t1rho_electron_s))
    throw std::invalid_argument("NoiseParams: times must be positive");
  auto fraction = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!fraction(mapping_gate_efficiency) || !fraction(nuclear_init_polarization) ||
      !fraction(electron_init_polarization))
    throw std::invalid_argument("NoiseParams: fractions must be in [0, 1]");
}

DensityMatrix initial_state(const NoiseParams& noise) {
  noise.validate();
  double pe = noise.electron_init_polarization;
  double pn = noise.nuclear_init_polarization;
  Eigen::VectorXd pops(4);
  pops << pe * pn, pe * (1.0 - pn), (1.0 - pe) * pn, (1.0 - pe) * (1.0 - pn);
  return DensityMatrix::diagonal(pops);
}

DriveGenerator drive_generator(const SystemParams& sys, Transition t, double phase_rad,
                               double rabi_hz) {
  sys.validate();
  if (!(rabi_hz > 0.0)) throw std::invalid_argument("drive_generator: rabi_hz must be positive");
  if (sys.enforce_selectivity && rabi_hz > 0.2 * sys.selectivity_gap_hz(t))
    throw std::invalid_argument(
        "drive_generator: rabi frequency exceeds 20% of the selectivity gap for " +
        std::string(transition_name(t)) + " (set enforce_selectivity=false to override)");
  Levels lv = transition_levels(t);
  ComplexMatrix gen = ComplexMatrix::Zero(4, 4);
  gen(lv.lo, lv.hi) = 0.5 * rabi_hz * std::exp(-kI * phase_rad);
  gen(lv.hi, lv.lo) = std::conj(gen(lv.lo, lv.hi));
  return DriveGenerator{std::move(gen), t, rabi_hz};
}

DensityMatrix evolve_pulse(const DensityMatrix& state, const DriveGenerator& gen,
                           double duration_s, const NoiseParams& noise) {
  if (duration_s < 0.0) throw std::invalid_argument("evolve_pulse: negative duration");
  noise.validate();
  if (duration_s == 0.0) return state;

  // the generator is a single off-diagonal block, so the propagator closes in
  // that block: exp(-i 2pi G t) = cos(pi rabi t) I - i sin(pi rabi t) G/(rabi/2)
  Levels lv = transition_levels(gen.transition);
  double angle = M_PI * gen.rabi_hz * duration_s;
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  u(lv.lo, lv.lo) = std::cos(angle);
  u(lv.hi, lv.hi) = std::cos(angle);
  u(lv.lo, lv.hi) = -kI * std::sin(angle) * gen.matrix(lv.lo, lv.hi) / (0.5 * gen.rabi_hz);
  u(lv.hi, lv.lo) = -kI * std::sin(angle) * gen.matrix(lv.hi, lv.lo) / (0.5 * gen.rabi_hz);
  DensityMatrix out = qcore::apply_unitary(state, u);

  // driven-envelope decay between dressed states, Gaussian in the dressed
  // level splitting so the driven pair decays at exactly 1/t1rho
  double t1rho =
      is_electron_transition(gen.transition) ? noise.t1rho_electron_s : noise.t1rho_nuclear_s;
  if (std::isfinite(t1rho)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gen.matrix);
    const Eigen::VectorXd& h = es.eigenvalues();
    Eigen::MatrixXd mult(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double x = (h[i] - h[j]) / gen.rabi_hz;
        mult(i, j) = std::exp(-(duration_s / t1rho) * x * x);
      }
    out = qcore::apply_channel(out, conjugated_multiplier(mult, es.eigenvectors()));
  }

  // the undriven species keeps dephasing at its free rate; the driven one is
  // protected by the drive (that is what t1rho describes)
  Eigen::MatrixXd spectator = is_electron_transition(gen.transition)
                                  ? free_dephasing_multiplier(duration_s, noise, false)
                                  : electron_only_multiplier(duration_s, noise);
  if ((spectator.array() < 1.0).any())
    out = qcore::apply_channel(out, KrausChannel::from_multiplier(spectator));

  return apply_t1(out, duration_s, noise);
}

DensityMatrix evolve_free(const DensityMatrix& state, double duration_s,
                          const NoiseParams& noise) {
  if (duration_s < 0.0) throw std::invalid_argument("evolve_free: negative duration");
  noise.validate();
  if (duration_s == 0.0) return state;
  DensityMatrix out = state;
  Eigen::MatrixXd mult = free_dephasing_multiplier(duration_s, noise, true);
  if ((mult.array() < 1.0).any())
    out = qcore::apply_channel(out, KrausChannel::from_multiplier(mult));
  return apply_t1(out, duration_s, noise);
}

}  // namespace nvmet::nvmodel
