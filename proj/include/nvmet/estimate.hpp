#pragma once

// Statistical layer: cosine fits of Rabi traces, quadrature phase extraction,
// the full probe-to-phase pipeline, and the scaling-law fits applied to
// collections of (repeat budget, uncertainty) points.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nvmet/experiment.hpp"
#include "nvmet/readout.hpp"

namespace nvmet::estimate {

using experiment::ExperimentModel;
using experiment::ProbeKind;

inline constexpr double kNoDecay = std::numeric_limits<double>::infinity();

// wraps into (-pi, pi]
double wrap_pi(double angle);

struct CosineFit {
  double amplitude = 0.0;  // signed; the model phase is zero at the first sample
  double offset = 0.0;
  double frequency_hz = 0.0;
  double decay_s = kNoDecay;  // fixed envelope exp(-t/decay) when finite
  double residual_norm = 0.0;
  double amplitude_sd = 0.0;
  double offset_sd = 0.0;
};

// shared-frequency fit of the two quadrature traces
struct PairFit {
  CosineFit x;  // analysis phase 0
  CosineFit y;  // analysis phase 90 degrees
  double frequency_hz = 0.0;
  double amplitude_cov = 0.0;  // Cov(Ax, Ay) induced by the shared frequency
};

struct PhaseEstimate {
  double phi_hat_rad = 0.0;
  double sd_rad = 0.0;
  // pre-halving quadrature phase for the entangled kind (it tracks 2 phi);
  // equal to phi_hat for the single kind
  double raw_phase_rad = 0.0;
  double raw_sd_rad = 0.0;
  std::uint64_t nu = 0;
  ProbeKind kind = ProbeKind::Single;
};

struct FitResult {
  std::string model;
  std::vector<std::string> param_names;
  std::vector<double> params;
  std::vector<double> param_sds;
  double adj_r2 = 0.0;

  double param(const std::string& name) const;
  double param_sd(const std::string& name) const;
};

// Weighted least squares of y(t) = y0 + A cos(2 pi f (t - t_first)) * env,
// env = exp(-(t - t_first)/decay). Weights are 1/sd_of_mean^2 with
// sd_of_mean = trace sd / sqrt(blocks); an all-zero sd column means an
// analytic trace and is fitted unweighted with zero parameter sds. The
// frequency is profiled out on a bracketed 1-d search seeded by the trace
// periodogram unless fixed_freq pins it.
CosineFit fit_cosine(const readout::RabiTrace& trace,
                     std::optional<double> fixed_freq = std::nullopt,
                     double decay_s = kNoDecay);

// same model with one frequency shared by both traces; the returned
// amplitude covariance feeds the phase-variance propagation
PairFit fit_cosine_pair(const readout::RabiTrace& trace_x, const readout::RabiTrace& trace_y,
                        std::optional<double> fixed_freq = std::nullopt,
                        double decay_s = kNoDecay);

// quadrant-correct arctangent of the signed quadrature amplitudes, (-pi, pi]
double extract_phase(double ax, double ay);

// Full pipeline: acquire both quadrature traces per chain, fit the pair with
// a shared frequency, extract the phase arc-tangent, and combine chains.
// Entangled estimates halve the raw phase and its sd; single estimates
// average the nuclear and electron phases with equal weight. nu follows the
// model's accounting mode. Requires nu >= 1000.
PhaseEstimate estimate_phase(ProbeKind kind, double phi_true, std::uint64_t nu,
                             std::uint64_t seed, const ExperimentModel& model);

// Photon-statistics lower bound on the sd of an unbiased phase estimate from
// the same acquisition budget: per-point Fisher information of the
// signal/reference pair with the brightness treated as a nuisance, summed
// over grid points, quadratures, and chains.
double pipeline_crb(ProbeKind kind, double phi, std::uint64_t nu, const ExperimentModel& model);

// least squares of sd = a/sqrt(nu) + c with c clamped at zero; points are
// (nu, sd) pairs, at least 4 distinct nu
FitResult fit_sd_scaling(const std::vector<std::pair<double, double>>& points);

// least squares of sd^2 = a/nu + c with c clamped at zero; points are
// (nu, sd^2) pairs
FitResult fit_variance_scaling(const std::vector<std::pair<double, double>>& points);

// Ordinary least squares on (log nu, log sd). subtract_c removes a constant
// floor before taking logs (every sd must stay positive). fixed_decay_slope
// pins the decay magnitude m, forcing log-log slope -m and fitting only the
// intercept. Reports the adjusted R^2; errors when no residual degrees of
// freedom remain.
FitResult fit_loglog(const std::vector<std::pair<double, double>>& points,
                     std::optional<double> subtract_c = std::nullopt,
                     std::optional<double> fixed_decay_slope = std::nullopt);

std::string serialize_fit(const FitResult& fit);
std::string serialize_estimate(const PhaseEstimate& estimate);

}  // namespace nvmet::estimate
