#include "nvmet/estimate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "nvmet/rng.hpp"

namespace nvmet::estimate {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kGolden = 0.6180339887498949;

double wrap_sum(double base, double delta) { return wrap_pi(base + delta); }

// trace rebased to its first sample, with weights 1/sigma^2 of each mean
struct WeightedTrace {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> w;
  bool analytic = false;  // all-zero sd column: exact model data
};

WeightedTrace rebase(const readout::RabiTrace& trace) {
  trace.validate();
  std::size_t n = trace.durations_s.size();
  if (n < 5) throw std::invalid_argument("cosine fit needs at least 5 points");
  double lo = *std::min_element(trace.means.begin(), trace.means.end());
  double hi = *std::max_element(trace.means.begin(), trace.means.end());
  if (!(hi - lo > 1e-12 * std::max(1.0, std::abs(hi)))) {
    throw std::invalid_argument("degenerate trace: no modulation to fit");
  }

  WeightedTrace out;
  out.t.resize(n);
  out.y = trace.means;
  out.w.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) out.t[i] = trace.durations_s[i] - trace.durations_s[0];

  double max_sd = *std::max_element(trace.sds.begin(), trace.sds.end());
  if (max_sd == 0.0) {
    out.analytic = true;
    return out;
  }
  // a zero sd among sampled points is a fluke of a small block count; give it
  // the smallest observed scale instead of infinite weight
  double min_pos = max_sd;
  for (double sd : trace.sds) {
    if (sd > 0.0) min_pos = std::min(min_pos, sd);
  }
  double inv_blocks = 1.0 / static_cast<double>(trace.blocks);
  for (std::size_t i = 0; i < n; ++i) {
    double sd = trace.sds[i] > 0.0 ? trace.sds[i] : min_pos;
    double var_mean = sd * sd * inv_blocks;
    out.w[i] = 1.0 / var_mean;
  }
  return out;
}

std::vector<double> basis_column(const WeightedTrace& tr, double freq, double decay_s) {
  std::vector<double> c(tr.t.size());
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    double env = std::isfinite(decay_s) ? std::exp(-tr.t[i] / decay_s) : 1.0;
    c[i] = std::cos(2.0 * M_PI * freq * tr.t[i]) * env;
  }
  return c;
}

struct LinearSolution {
  double offset = 0.0;
  double amplitude = 0.0;
  double chi2 = 0.0;
};

LinearSolution solve_offset_amplitude(const WeightedTrace& tr, const std::vector<double>& c) {
  double s11 = 0, s1c = 0, scc = 0, s1y = 0, scy = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    double w = tr.w[i];
    s11 += w;
    s1c += w * c[i];
    scc += w * c[i] * c[i];
    s1y += w * tr.y[i];
    scy += w * c[i] * tr.y[i];
  }
  double det = s11 * scc - s1c * s1c;
  if (!(std::abs(det) > 1e-14 * s11 * std::max(scc, 1e-300))) {
    throw std::runtime_error("cosine basis is degenerate on this duration grid");
  }
  LinearSolution sol;
  sol.offset = (scc * s1y - s1c * scy) / det;
  sol.amplitude = (s11 * scy - s1c * s1y) / det;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    double r = tr.y[i] - sol.offset - sol.amplitude * c[i];
    sol.chi2 += tr.w[i] * r * r;
  }
  return sol;
}

double pair_chi2(const std::vector<const WeightedTrace*>& traces, double freq, double decay_s) {
  double total = 0.0;
  for (const WeightedTrace* tr : traces) {
    total += solve_offset_amplitude(*tr, basis_column(*tr, freq, decay_s)).chi2;
  }
  return total;
}

// crude spectral estimate: strongest non-zero frequency bin of the pooled,
// mean-subtracted traces
double periodogram_peak(const std::vector<const WeightedTrace*>& traces) {
  const WeightedTrace& lead = *traces.front();
  std::size_t n = lead.t.size();
  double span = lead.t.back() - lead.t.front();
  double bin = 1.0 / (span * static_cast<double>(n) / static_cast<double>(n - 1));
  double best_f = bin;
  double best_p = -1.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    double f = bin * static_cast<double>(k);
    double power = 0.0;
    for (const WeightedTrace* tr : traces) {
      double mean = 0.0;
      for (double y : tr->y) mean += y;
      mean /= static_cast<double>(tr->y.size());
      double re = 0.0;
      double im = 0.0;
      for (std::size_t i = 0; i < tr->t.size(); ++i) {
        double arg = 2.0 * M_PI * f * tr->t[i];
        re += (tr->y[i] - mean) * std::cos(arg);
        im += (tr->y[i] - mean) * std::sin(arg);
      }
      power += re * re + im * im;
    }
    if (power > best_p) {
      best_p = power;
      best_f = f;
    }
  }
  return best_f;
}

// profile the frequency out of the linear fits on a bracketed golden-section
// search around the periodogram peak
double search_frequency(const std::vector<const WeightedTrace*>& traces, double decay_s) {
  double f0 = periodogram_peak(traces);
  const WeightedTrace& lead = *traces.front();
  double span = lead.t.back() - lead.t.front();
  double bin = 1.0 / span;
  double lo = std::max(f0 - bin, 0.25 * bin);
  double hi = f0 + bin;

  double a = lo;
  double b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = pair_chi2(traces, x1, decay_s);
  double f2 = pair_chi2(traces, x2, decay_s);
  int iter = 0;
  while (b - a > 1e-13 * b) {
    if (++iter > kMaxIterations) {
      throw std::runtime_error("frequency search did not converge within 200 iterations");
    }
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = pair_chi2(traces, x1, decay_s);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = pair_chi2(traces, x2, decay_s);
    }
  }
  return 0.5 * (a + b);
}

CosineFit finish_fit(double freq, double decay_s, const LinearSolution& sol) {
  CosineFit fit;
  fit.offset = sol.offset;
  fit.amplitude = sol.amplitude;
  fit.frequency_hz = freq;
  fit.decay_s = decay_s;
  fit.residual_norm = std::sqrt(sol.chi2);
  return fit;
}

// asymptotic covariance of the stacked parameters
// (offset_x, amp_x[, offset_y, amp_y][, freq]) at the fitted point
Eigen::MatrixXd stacked_covariance(const std::vector<const WeightedTrace*>& traces,
                                   const std::vector<LinearSolution>& sols, double freq,
                                   double decay_s, bool free_freq) {
  int linear = 2 * static_cast<int>(traces.size());
  int dim = linear + (free_freq ? 1 : 0);
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const WeightedTrace& tr = *traces[k];
    int base = 2 * static_cast<int>(k);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      double env = std::isfinite(decay_s) ? std::exp(-tr.t[i] / decay_s) : 1.0;
      double arg = 2.0 * M_PI * freq * tr.t[i];
      Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
      row(base) = 1.0;
      row(base + 1) = std::cos(arg) * env;
      if (free_freq) {
        row(dim - 1) = -sols[k].amplitude * 2.0 * M_PI * tr.t[i] * std::sin(arg) * env;
      }
      normal.noalias() += tr.w[i] * row * row.transpose();
    }
  }
  return normal.inverse();
}

void assign_uncertainties(const std::vector<const WeightedTrace*>& traces,
                          std::vector<LinearSolution>& sols, double freq, double decay_s,
                          bool free_freq, std::vector<CosineFit*> fits, double* amp_cov) {
  bool analytic = true;
  for (const WeightedTrace* tr : traces) analytic = analytic && tr->analytic;
  if (analytic) {
    if (amp_cov) *amp_cov = 0.0;
    return;
  }
  Eigen::MatrixXd cov = stacked_covariance(traces, sols, freq, decay_s, free_freq);
  for (std::size_t k = 0; k < fits.size(); ++k) {
    int base = 2 * static_cast<int>(k);
    fits[k]->offset_sd = std::sqrt(std::max(cov(base, base), 0.0));
    fits[k]->amplitude_sd = std::sqrt(std::max(cov(base + 1, base + 1), 0.0));
  }
  if (amp_cov) *amp_cov = traces.size() == 2 ? cov(1, 3) : 0.0;
}

void check_freq(const std::optional<double>& fixed_freq) {
  if (fixed_freq && !(*fixed_freq > 0.0)) {
    throw std::invalid_argument("fixed frequency must be positive");
  }
}

}  // namespace

double wrap_pi(double angle) {
  double a = std::fmod(angle, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

double FitResult::param(const std::string& name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i) {
    if (param_names[i] == name) return params[i];
  }
  throw std::invalid_argument("fit has no parameter named " + name);
}

double FitResult::param_sd(const std::string& name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i) {
    if (param_names[i] == name) return param_sds[i];
  }
  throw std::invalid_argument("fit has no parameter named " + name);
}

CosineFit fit_cosine(const readout::RabiTrace& trace, std::optional<double> fixed_freq,
                     double decay_s) {
  check_freq(fixed_freq);
  WeightedTrace tr = rebase(trace);
  std::vector<const WeightedTrace*> traces{&tr};
  double freq = fixed_freq ? *fixed_freq : search_frequency(traces, decay_s);
  std::vector<LinearSolution> sols{solve_offset_amplitude(tr, basis_column(tr, freq, decay_s))};
  CosineFit fit = finish_fit(freq, decay_s, sols[0]);
  assign_uncertainties(traces, sols, freq, decay_s, !fixed_freq, {&fit}, nullptr);
  return fit;
}

PairFit fit_cosine_pair(const readout::RabiTrace& trace_x, const readout::RabiTrace& trace_y,
                        std::optional<double> fixed_freq, double decay_s) {
  check_freq(fixed_freq);
  WeightedTrace tx = rebase(trace_x);
  WeightedTrace ty = rebase(trace_y);
  std::vector<const WeightedTrace*> traces{&tx, &ty};
  double freq = fixed_freq ? *fixed_freq : search_frequency(traces, decay_s);
  std::vector<LinearSolution> sols{
      solve_offset_amplitude(tx, basis_column(tx, freq, decay_s)),
      solve_offset_amplitude(ty, basis_column(ty, freq, decay_s))};
  PairFit pair;
  pair.frequency_hz = freq;
  pair.x = finish_fit(freq, decay_s, sols[0]);
  pair.y = finish_fit(freq, decay_s, sols[1]);
  assign_uncertainties(traces, sols, freq, decay_s, !fixed_freq, {&pair.x, &pair.y},
                       &pair.amplitude_cov);
  return pair;
}

double extract_phase(double ax, double ay) {
  if (ax == 0.0 && ay == 0.0) {
    throw std::invalid_argument("both quadrature amplitudes are zero");
  }
  double phase = std::atan2(ax, ay);
  if (phase <= -M_PI) phase = M_PI;
  return phase;
}

namespace {

// per-point block SDs are noisy scale estimates at ten blocks; replacing them
// by their trace-wide RMS keeps the relative weighting honest without the
// variance inflation that inverse squared noisy weights would cause
void pool_sds(readout::RabiTrace& trace) {
  double sum_sq = 0.0;
  for (double sd : trace.sds) sum_sq += sd * sd;
  double pooled = std::sqrt(sum_sq / static_cast<double>(trace.sds.size()));
  if (pooled > 0.0) std::fill(trace.sds.begin(), trace.sds.end(), pooled);
}

struct ChainPhase {
  double phase = 0.0;
  double variance = 0.0;
};

ChainPhase run_chain(const ExperimentModel& model, pulses::Chain chain, double phi,
                     std::uint64_t nu_point, std::uint64_t seed) {
  std::vector<double> durations = experiment::trace_durations(model, chain);
  readout::RabiTrace traces[2];
  for (int q = 0; q < 2; ++q) {
    double theta = q == 0 ? 0.0 : M_PI_2;
    readout::StateFamily family = experiment::state_family(model, chain, phi, theta);
    std::uint64_t trace_seed =
        rng::derive(seed, {static_cast<std::uint64_t>(chain), static_cast<std::uint64_t>(q)});
    traces[q] = readout::measure_trace(durations, family, model.readout, nu_point, model.blocks,
                                       trace_seed, model.shot_noise);
    pool_sds(traces[q]);
  }
  PairFit pair = fit_cosine_pair(traces[0], traces[1]);
  double ax = pair.x.amplitude;
  double ay = pair.y.amplitude;
  ChainPhase out;
  out.phase = extract_phase(ax, ay);
  double norm = ax * ax + ay * ay;
  double vax = pair.x.amplitude_sd * pair.x.amplitude_sd;
  double vay = pair.y.amplitude_sd * pair.y.amplitude_sd;
  out.variance =
      (ay * ay * vax + ax * ax * vay - 2.0 * ax * ay * pair.amplitude_cov) / (norm * norm);
  return out;
}

}  // namespace

PhaseEstimate estimate_phase(ProbeKind kind, double phi_true, std::uint64_t nu,
                             std::uint64_t seed, const ExperimentModel& model) {
  model.validate();
  if (nu < 1000) throw std::invalid_argument("nu must be at least 1e3");
  std::uint64_t nu_point = experiment::repeats_per_point(model, nu);

  std::vector<ChainPhase> phases;
  for (pulses::Chain chain : experiment::chains_for(kind)) {
    phases.push_back(run_chain(model, chain, phi_true, nu_point, seed));
  }

  PhaseEstimate est;
  est.nu = nu;
  est.kind = kind;
  if (kind == ProbeKind::Entangled) {
    est.raw_phase_rad = phases[0].phase;
    est.raw_sd_rad = std::sqrt(std::max(phases[0].variance, 0.0));
    est.phi_hat_rad = 0.5 * est.raw_phase_rad;
    est.sd_rad = 0.5 * est.raw_sd_rad;
  } else {
    // equal-weight circular average of the nuclear and electron estimates
    double pn = phases[0].phase;
    double pe = phases[1].phase;
    est.phi_hat_rad = wrap_sum(pn, 0.5 * wrap_pi(pe - pn));
    est.sd_rad = 0.5 * std::sqrt(std::max(phases[0].variance + phases[1].variance, 0.0));
    est.raw_phase_rad = est.phi_hat_rad;
    est.raw_sd_rad = est.sd_rad;
  }

  if (model.systematic_phase_sd_deg > 0.0) {
    // one slow reference-phase offset per estimate; the probe phase itself
    // drifts, so the raw entangled phase moves twice as far
    rng::Xoshiro256ss drift(rng::derive(seed, {0x5d21f7ULL}));
    double eps = drift.gauss() * model.systematic_phase_sd_deg * M_PI / 180.0;
    double raw_eps = kind == ProbeKind::Entangled ? 2.0 * eps : eps;
    est.phi_hat_rad = wrap_pi(est.phi_hat_rad + eps);
    est.raw_phase_rad = wrap_pi(est.raw_phase_rad + raw_eps);
  }
  return est;
}

double pipeline_crb(ProbeKind kind, double phi, std::uint64_t nu, const ExperimentModel& model) {
  model.validate();
  if (nu < 1) throw std::invalid_argument("nu must be at least 1");
  std::uint64_t nu_point = experiment::repeats_per_point(model, nu);
  double photons = model.readout.photons_per_shot();
  double dphi = 1e-6;
  double fisher = 0.0;
  for (pulses::Chain chain : experiment::chains_for(kind)) {
    for (double theta : {0.0, M_PI_2}) {
      std::vector<double> mid = experiment::expected_curve(model, chain, phi, theta);
      std::vector<double> up = experiment::expected_curve(model, chain, phi + dphi, theta);
      std::vector<double> dn = experiment::expected_curve(model, chain, phi - dphi, theta);
      for (std::size_t i = 0; i < mid.size(); ++i) {
        double slope = (up[i] - dn[i]) / (2.0 * dphi);
        // signal and reference windows with the shot brightness profiled out
        fisher += static_cast<double>(nu_point) * photons * slope * slope /
                  (mid[i] * (1.0 + mid[i]));
      }
    }
  }
  if (!(fisher > 0.0)) throw std::runtime_error("phase carries no Fisher information here");
  return 1.0 / std::sqrt(fisher);
}

namespace {

void require_distinct_nu(const std::vector<std::pair<double, double>>& points) {
  std::set<double> distinct;
  for (const auto& [nu, value] : points) {
    if (!(nu > 0.0)) throw std::invalid_argument("repeat counts must be positive");
    if (!std::isfinite(value)) throw std::invalid_argument("scaling values must be finite");
    distinct.insert(nu);
  }
  if (distinct.size() < 4) {
    throw std::invalid_argument("scaling fits need at least 4 distinct repeat budgets");
  }
}

// least squares of y = a * x + c with the floor c clamped at zero
FitResult floored_line_fit(const char* model_id,
                           const std::vector<std::pair<double, double>>& points,
                           double (*xform)(double)) {
  require_distinct_nu(points);
  std::size_t n = points.size();
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (const auto& [nu, value] : points) {
    double x = xform(nu);
    sx += x;
    sxx += x * x;
    sy += value;
    sxy += x * value;
  }
  double nd = static_cast<double>(n);
  double det = nd * sxx - sx * sx;
  double a = (nd * sxy - sx * sy) / det;
  double c = (sxx * sy - sx * sxy) / det;
  bool clamped = false;
  if (c < 0.0) {
    // active-set step: the constrained optimum sits on the c = 0 face
    clamped = true;
    c = 0.0;
    a = sxy / sxx;
  }

  double ssr = 0.0;
  double mean_y = sy / nd;
  double sst = 0.0;
  for (const auto& [nu, value] : points) {
    double r = value - (a * xform(nu) + c);
    ssr += r * r;
    sst += (value - mean_y) * (value - mean_y);
  }
  int p = clamped ? 1 : 2;
  double dof = nd - static_cast<double>(p);
  double sigma2 = dof > 0 ? ssr / dof : 0.0;
  double var_a = clamped ? sigma2 / sxx : sigma2 * nd / det;
  double var_c = clamped ? 0.0 : sigma2 * sxx / det;

  FitResult fit;
  fit.model = model_id;
  fit.param_names = {"a", "c"};
  fit.params = {a, c};
  fit.param_sds = {std::sqrt(std::max(var_a, 0.0)), std::sqrt(std::max(var_c, 0.0))};
  double r2 = sst > 0.0 ? 1.0 - ssr / sst : (ssr <= 1e-30 ? 1.0 : 0.0);
  double adj_dof = nd - static_cast<double>(p) - 1.0;
  fit.adj_r2 = adj_dof > 0 ? 1.0 - (1.0 - r2) * (nd - 1.0) / adj_dof : r2;
  return fit;
}

}  // namespace

FitResult fit_sd_scaling(const std::vector<std::pair<double, double>>& points) {
  return floored_line_fit("sd_scaling", points, [](double nu) { return 1.0 / std::sqrt(nu); });
}

FitResult fit_variance_scaling(const std::vector<std::pair<double, double>>& points) {
  return floored_line_fit("variance_scaling", points, [](double nu) { return 1.0 / nu; });
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points,
                     std::optional<double> subtract_c, std::optional<double> fixed_decay_slope) {
  if (points.size() < 3) throw std::invalid_argument("log-log fit needs at least 3 points");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [nu, value] : points) {
    if (!(nu > 0.0)) throw std::invalid_argument("repeat counts must be positive");
    double adjusted = value - subtract_c.value_or(0.0);
    if (!(adjusted > 0.0)) {
      throw std::invalid_argument("floor subtraction left a nonpositive uncertainty");
    }
    x.push_back(std::log(nu));
    y.push_back(std::log(adjusted));
  }

  double nd = static_cast<double>(points.size());
  double slope = 0.0;
  double intercept = 0.0;
  double slope_sd = 0.0;
  double intercept_sd = 0.0;
  int p = 0;
  if (fixed_decay_slope) {
    // pinned decay magnitude m: model log sd = intercept - m log nu
    p = 1;
    slope = -std::abs(*fixed_decay_slope);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += y[i] - slope * x[i];
    intercept = sum / nd;
  } else {
    p = 2;
    double sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sxx += x[i] * x[i];
      sy += y[i];
      sxy += x[i] * y[i];
    }
    double det = nd * sxx - sx * sx;
    if (!(std::abs(det) > 1e-12 * nd * sxx)) {
      throw std::invalid_argument("repeat budgets are too clustered for a log-log fit");
    }
    slope = (nd * sxy - sx * sy) / det;
    intercept = (sxx * sy - sx * sxy) / det;
  }

  double adj_dof = nd - static_cast<double>(p) - 1.0;
  if (!(adj_dof > 0)) {
    throw std::invalid_argument("adjusted R^2 needs more points than parameters plus one");
  }
  double ssr = 0.0;
  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= nd;
  double sst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (intercept + slope * x[i]);
    ssr += r * r;
    sst += (y[i] - mean_y) * (y[i] - mean_y);
  }
  double sigma2 = ssr / (nd - static_cast<double>(p));
  if (fixed_decay_slope) {
    intercept_sd = std::sqrt(sigma2 / nd);
  } else {
    double sx = 0, sxx = 0;
    for (double v : x) {
      sx += v;
      sxx += v * v;
    }
    double det = nd * sxx - sx * sx;
    slope_sd = std::sqrt(std::max(sigma2 * nd / det, 0.0));
    intercept_sd = std::sqrt(std::max(sigma2 * sxx / det, 0.0));
  }

  FitResult fit;
  fit.model = "loglog";
  fit.param_names = {"slope", "intercept"};
  fit.params = {slope, intercept};
  fit.param_sds = {slope_sd, intercept_sd};
  double r2 = sst > 0.0 ? 1.0 - ssr / sst : (ssr <= 1e-30 ? 1.0 : 0.0);
  fit.adj_r2 = 1.0 - (1.0 - r2) * (nd - 1.0) / adj_dof;
  return fit;
}

namespace {

std::string fmt_line(const char* key, double value) {
  char line[96];
  std::snprintf(line, sizeof line, "%s %.17g\n", key, value);
  return line;
}

}  // namespace

std::string serialize_fit(const FitResult& fit) {
  std::string out = "model " + fit.model + "\n";
  out += fmt_line("adj_r2", fit.adj_r2);
  for (std::size_t i = 0; i < fit.param_names.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof line, "param %s %.17g %.17g\n", fit.param_names[i].c_str(),
                  fit.params[i], fit.param_sds[i]);
    out += line;
  }
  return out;
}

std::string serialize_estimate(const PhaseEstimate& estimate) {
  std::string out = std::string("kind ") + experiment::kind_name(estimate.kind) + "\n";
  out += fmt_line("phi_hat_rad", estimate.phi_hat_rad);
  out += fmt_line("sd_rad", estimate.sd_rad);
  out += fmt_line("raw_phase_rad", estimate.raw_phase_rad);
  out += fmt_line("raw_sd_rad", estimate.raw_sd_rad);
  char line[64];
  std::snprintf(line, sizeof line, "nu %llu\n", static_cast<unsigned long long>(estimate.nu));
  out += line;
  return out;
}

}  // namespace nvmet::estimate
