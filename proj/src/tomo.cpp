#include "nvmet/tomo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <utility>

#include "nvmet/rng.hpp"

namespace nvmet::tomo {

namespace {

using nvmodel::Transition;
using qcore::Complex;
using qcore::ComplexMatrix;

// ideal pi-pulse unitary: |lo> -> -i e^{+i phase}|hi>, |hi> -> -i e^{-i phase}|lo>
ComplexMatrix pi_unitary(Transition t, double phase_rad) {
  nvmodel::Levels lv = nvmodel::transition_levels(t);
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  u(lv.lo, lv.lo) = Complex(0.0, 0.0);
  u(lv.hi, lv.hi) = Complex(0.0, 0.0);
  u(lv.hi, lv.lo) = Complex(0.0, -1.0) * std::exp(Complex(0.0, phase_rad));
  u(lv.lo, lv.hi) = Complex(0.0, -1.0) * std::exp(Complex(0.0, -phase_rad));
  return u;
}

int sole_source(const ComplexMatrix& w, int dest) {
  for (int j = 0; j < 4; ++j) {
    if (std::abs(w(dest, j)) > 0.5) return j;
  }
  throw std::logic_error("transfer prefix does not map a single level onto the destination");
}

// signal gain: d(expected ratio)/dz for the working pair's population
// difference z. MW pairs straddle the optical contrast directly; the RF pair
// sits inside m_S = 0 and is read through the mapping gate, which inverts the
// sign and pays the transfer efficiency.
double signal_gain(const TomoEntry& entry, const TomoParams& params) {
  if (entry.needs_mapping()) {
    return -0.5 * params.readout.contrast * params.noise.mapping_gate_efficiency;
  }
  return 0.5 * params.readout.contrast;
}

struct QuadratureFit {
  double offset = 0.0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

QuadratureFit fit_quadratures(const readout::RabiTrace& trace, double frequency_hz) {
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < trace.durations_s.size(); ++i) {
    double angle = 2.0 * M_PI * frequency_hz * trace.durations_s[i];
    Eigen::Vector3d basis(1.0, std::cos(angle), std::sin(angle));
    normal += basis * basis.transpose();
    moment += basis * trace.means[i];
  }
  Eigen::Vector3d sol = normal.ldlt().solve(moment);
  return {sol(0), sol(1), sol(2)};
}

}  // namespace

const char* component_name(Component c) { return c == Component::Real ? "real" : "imag"; }

void TomographySchedule::validate() const {
  if (entries.size() != 12) throw std::invalid_argument("schedule must hold 12 entries");
  std::set<std::pair<int, int>> elements;
  for (const TomoEntry& e : entries) {
    if (e.row < 0 || e.row > 3 || e.col < 0 || e.col > 3 || e.row == e.col) {
      throw std::invalid_argument("schedule entry targets an invalid element");
    }
    if (std::abs(std::abs(e.transfer) - 1.0) > 1e-9) {
      throw std::invalid_argument("transfer factors must have unit modulus");
    }
    elements.insert({std::min(e.row, e.col), std::max(e.row, e.col)});
  }
  if (elements.size() != 6) {
    throw std::invalid_argument("schedule must cover all six off-diagonal elements");
  }
  for (const auto& [lo, hi] : elements) {
    int phases = 0;
    bool real_seen = false, imag_seen = false;
    for (const TomoEntry& e : entries) {
      if (std::min(e.row, e.col) != lo || std::max(e.row, e.col) != hi) continue;
      ++phases;
      real_seen |= e.component == Component::Real;
      imag_seen |= e.component == Component::Imag;
    }
    if (phases != 2 || !real_seen || !imag_seen) {
      throw std::invalid_argument("every element needs one real and one imag entry");
    }
  }
}

TomographySchedule build_schedule(const pulses::DriveSettings& drive) {
  drive.validate();
  struct Plan {
    Transition working;
    std::vector<Transition> prefix;
  };
  const std::array<Plan, 6> plans = {{
      {Transition::Rf0, {}},
      {Transition::MwUp, {}},
      {Transition::MwDown, {}},
      {Transition::Rf0, {Transition::MwDown}},
      {Transition::Rf0, {Transition::MwUp}},
      {Transition::Rf0, {Transition::MwUp, Transition::MwDown}},
  }};

  TomographySchedule schedule;
  for (const Plan& plan : plans) {
    pulses::PulseSequence prefix;
    ComplexMatrix w = ComplexMatrix::Identity(4, 4);
    for (Transition t : plan.prefix) {
      prefix.append(pulses::Pulse{t, drive.pi_duration_s(t), 0.0, drive.rabi_for(t)});
      w = pi_unitary(t, 0.0) * w;
    }
    nvmodel::Levels lv = nvmodel::transition_levels(plan.working);
    int row = sole_source(w, lv.hi);
    int col = sole_source(w, lv.lo);
    Complex transfer = w(lv.hi, row) * std::conj(w(lv.lo, col));

    // the sine quadrature measures Im(transfer * rho(row, col)); a real
    // transfer keeps phase 0 on the imaginary part, an imaginary transfer
    // swaps the roles of the two drive phases
    bool swapped = std::abs(transfer.imag()) > 0.5;
    for (double phase : {0.0, M_PI / 2.0}) {
      TomoEntry entry;
      entry.working = plan.working;
      entry.prefix = prefix;
      entry.drive_phase_rad = phase;
      entry.row = row;
      entry.col = col;
      entry.transfer = transfer;
      bool first_phase = phase == 0.0;
      entry.component = (first_phase != swapped) ? Component::Imag : Component::Real;
      schedule.entries.push_back(entry);
    }
  }
  schedule.validate();
  return schedule;
}

TomoParams TomoParams::ideal() {
  TomoParams params;
  params.noise = nvmodel::NoiseParams::ideal();
  return params;
}

TomoParams TomoParams::noiseless() {
  TomoParams params = ideal();
  params.shot_noise = false;
  return params;
}

void TomoParams::validate() const {
  sys.validate();
  noise.validate();
  readout.validate();
  drive.validate();
  if (points_per_trace < 8) throw std::invalid_argument("traces need at least 8 points");
  if (blocks < 2) throw std::invalid_argument("traces need at least 2 blocks");
}

qcore::DensityMatrix project_psd(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("projection needs a square matrix");
  }
  ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  const Eigen::VectorXd& d = es.eigenvalues();
  if (!(d.maxCoeff() > 0.0)) {
    throw std::invalid_argument("matrix has no positive part to project onto");
  }
  // Euclidean projection of the spectrum onto the probability simplex: shift
  // by the largest feasible theta, clip, keep the eigenbasis
  std::vector<double> sorted(d.data(), d.data() + d.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cum += sorted[k];
    double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) theta = t;
  }
  Eigen::VectorXd lam = (d.array() - theta).cwiseMax(0.0);
  lam /= lam.sum();
  ComplexMatrix out =
      es.eigenvectors() * lam.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return qcore::DensityMatrix(out);
}

double fidelity(const qcore::DensityMatrix& a, const qcore::DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity needs equal dimensions");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ea(a.matrix());
  Eigen::VectorXd lam = ea.eigenvalues().cwiseMax(0.0);
  ComplexMatrix root = ea.eigenvectors() * lam.cwiseSqrt().cast<Complex>().asDiagonal() *
                       ea.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> em(root * b.matrix() * root);
  double trace_root = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return trace_root * trace_root;
}

TomographyResult run_tomography_state(const qcore::DensityMatrix& prepared, std::uint64_t nu,
                                      std::uint64_t seed, const TomoParams& params,
                                      const std::optional<qcore::DensityMatrix>& target) {
  params.validate();
  if (nu < 10000) throw std::invalid_argument("tomography needs nu >= 1e4 per point");

  TomographySchedule schedule = build_schedule(params.drive);
  ComplexMatrix raw = ComplexMatrix::Zero(4, 4);

  // one full Rabi period per trace; sine amplitudes carry the coherences,
  // cosine amplitudes the population differences
  Eigen::MatrixXd diff_rows = Eigen::MatrixXd::Zero(12, 4);
  Eigen::VectorXd diff_vals = Eigen::VectorXd::Zero(12);
  std::vector<QuadratureFit> fits(schedule.entries.size());
  for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
    const TomoEntry& entry = schedule.entries[i];
    double f = params.drive.rabi_for(entry.working);
    std::vector<double> durations(params.points_per_trace);
    for (int p = 0; p < params.points_per_trace; ++p) {
      durations[p] = static_cast<double>(p) / (f * params.points_per_trace);
    }
    auto family = [&](double duration_s) {
      pulses::PulseSequence seq = entry.prefix;
      seq.append(pulses::rabi_block(entry.working, entry.drive_phase_rad, duration_s,
                                    params.drive));
      if (entry.needs_mapping()) {
        seq.append(pulses::mapping_gate(params.noise.mapping_gate_efficiency, params.drive));
      }
      return pulses::simulate_from(prepared, seq, params.sys, params.noise);
    };
    readout::RabiTrace trace = readout::measure_trace(
        durations, family, params.readout, nu, params.blocks, rng::derive(seed, {i}),
        params.shot_noise);
    fits[i] = fit_quadratures(trace, f);

    double gain = signal_gain(entry, params);
    diff_rows(static_cast<int>(i), entry.col) = 1.0;
    diff_rows(static_cast<int>(i), entry.row) = -1.0;
    diff_vals(static_cast<int>(i)) = fits[i].cos_amp / gain;
  }

  for (std::size_t i = 0; i < schedule.entries.size(); i += 2) {
    const TomoEntry& entry = schedule.entries[i];
    double gain = signal_gain(entry, params);
    Complex measured(-fits[i + 1].sin_amp / (2.0 * gain), fits[i].sin_amp / (2.0 * gain));
    Complex value = measured / entry.transfer;
    raw(entry.row, entry.col) = value;
    raw(entry.col, entry.row) = std::conj(value);
  }

  // trace-constrained least squares on the twelve population differences
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(5, 5);
  kkt.topLeftCorner(4, 4) = 2.0 * diff_rows.transpose() * diff_rows;
  kkt.topRightCorner(4, 1).setOnes();
  kkt.bottomLeftCorner(1, 4).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(5);
  rhs.head(4) = 2.0 * diff_rows.transpose() * diff_vals;
  rhs(4) = 1.0;
  Eigen::VectorXd pops = kkt.fullPivLu().solve(rhs).head(4);
  for (int l = 0; l < 4; ++l) raw(l, l) = pops(l);

  TomographyResult result{project_psd(raw), raw, std::nullopt};
  if (target) result.fidelity = fidelity(result.state, *target);
  return result;
}

TomographyResult run_tomography(const pulses::PulseSequence& prep, std::uint64_t nu,
                                std::uint64_t seed, const TomoParams& params,
                                const std::optional<qcore::DensityMatrix>& target) {
  return run_tomography_state(pulses::simulate(prep, params.sys, params.noise), nu, seed,
                              params, target);
}

std::string serialize_schedule(const TomographySchedule& schedule) {
  std::string out = "# entry\tworking\tphase_deg\telement\tcomponent\tprefix\n";
  for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
    const TomoEntry& e = schedule.entries[i];
    std::string prefix;
    for (const auto& step : e.prefix.steps) {
      if (const auto* p = std::get_if<pulses::Pulse>(&step)) {
        if (!prefix.empty()) prefix += '+';
        prefix += nvmodel::transition_name(p->transition);
      }
    }
    if (prefix.empty()) prefix = "none";
    char line[160];
    std::snprintf(line, sizeof line, "%zu\t%s\t%.0f\t%d,%d\t%s\t%s\n", i,
                  nvmodel::transition_name(e.working), e.drive_phase_rad * 180.0 / M_PI,
                  e.row, e.col, component_name(e.component), prefix.c_str());
    out += line;
  }
  return out;
}

std::string serialize_components(const ComplexMatrix& m) {
  std::string out = "# row\tcol\tre\tim\n";
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      char line[120];
      std::snprintf(line, sizeof line, "%d\t%d\t%.17g\t%.17g\n", r, c, m(r, c).real(),
                    m(r, c).imag());
      out += line;
    }
  }
  return out;
}

}  // namespace nvmet::tomo
