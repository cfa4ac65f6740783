#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nvmet/estimate.hpp"
#include "nvmet/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace nvmet::estimate;
using nvmet::experiment::ExperimentModel;
using nvmet::experiment::ProbeKind;
using nvmet::readout::RabiTrace;

namespace {

constexpr double kDeg = M_PI / 180.0;

RabiTrace synthetic_trace(int n, double dt, double y0, double amp, double freq, double sd,
                          std::uint64_t seed = 0, double t_start = 0.0) {
  RabiTrace trace;
  trace.nu = 1;
  trace.blocks = 1;
  nvmet::rng::Xoshiro256ss gen(seed);
  for (int i = 0; i < n; ++i) {
    double t = t_start + i * dt;
    double y = y0 + amp * std::cos(2 * M_PI * freq * (t - t_start));
    if (sd > 0.0) y += sd * gen.gauss();
    trace.durations_s.push_back(t);
    trace.means.push_back(y);
    trace.sds.push_back(sd);
  }
  return trace;
}

}  // namespace

TEST_CASE("phase extraction is quadrant-correct") {
  CHECK(extract_phase(1.0, 1.0) == doctest::Approx(45.0 * kDeg));
  CHECK(extract_phase(std::tan(30.0 * kDeg), 1.0) == doctest::Approx(30.0 * kDeg));
  CHECK(extract_phase(0.0, -1.0) == doctest::Approx(180.0 * kDeg));
  CHECK(extract_phase(-1.0, 0.0) == doctest::Approx(-90.0 * kDeg));
  for (int k = -7; k <= 8; ++k) {
    double theta = k * (M_PI / 8.0) - 1e-3;
    CHECK(extract_phase(0.7 * std::sin(theta), 0.7 * std::cos(theta)) ==
          doctest::Approx(theta).epsilon(1e-12));
  }
  CHECK_THROWS_AS(extract_phase(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("noiseless cosine fit recovers the model exactly") {
  RabiTrace trace = synthetic_trace(12, 2e-6, 0.85, 0.15, 50e3, 0.0);
  CosineFit fit = fit_cosine(trace);
  CHECK(fit.amplitude == doctest::Approx(0.15).epsilon(1e-10));
  CHECK(fit.offset == doctest::Approx(0.85).epsilon(1e-10));
  CHECK(fit.frequency_hz == doctest::Approx(50e3).epsilon(1e-9));
  CHECK(fit.residual_norm < 1e-12);
  CHECK(fit.amplitude_sd == 0.0);

  CosineFit pinned = fit_cosine(trace, 50e3);
  CHECK(pinned.amplitude == doctest::Approx(0.15).epsilon(1e-13));
  CHECK(pinned.offset == doctest::Approx(0.85).epsilon(1e-13));

  // negative amplitude carries through with its sign
  RabiTrace neg = synthetic_trace(12, 2e-6, 0.85, -0.12, 50e3, 0.0);
  CHECK(fit_cosine(neg).amplitude == doctest::Approx(-0.12).epsilon(1e-10));
}

TEST_CASE("cosine fit rejects bad input") {
  RabiTrace flat = synthetic_trace(12, 2e-6, 0.85, 0.0, 50e3, 0.0);
  CHECK_THROWS_AS(fit_cosine(flat), std::invalid_argument);

  RabiTrace tiny = synthetic_trace(4, 2e-6, 0.85, 0.15, 50e3, 0.0);
  CHECK_THROWS_AS(fit_cosine(tiny), std::invalid_argument);

  RabiTrace trace = synthetic_trace(12, 2e-6, 0.85, 0.15, 50e3, 0.0);
  CHECK_THROWS_AS(fit_cosine(trace, -5.0), std::invalid_argument);
}

TEST_CASE("cosine fit is calibrated against injected gaussian noise") {
  int covered = 0;
  int runs = 200;
  for (int s = 0; s < runs; ++s) {
    RabiTrace trace = synthetic_trace(24, 1e-6, 0.85, 0.15, 50e3, 0.01, 1000 + s);
    CosineFit fit = fit_cosine(trace);
    if (std::abs(fit.amplitude - 0.15) < 3.0 * fit.amplitude_sd) ++covered;
  }
  CHECK(covered >= static_cast<int>(0.95 * runs));
}

TEST_CASE("pair fit shares one frequency across quadratures") {
  double phi = 33.0 * kDeg;
  RabiTrace tx = synthetic_trace(24, 1e-6, 0.85, 0.15 * std::sin(phi), 50e3, 0.0);
  RabiTrace ty = synthetic_trace(24, 1e-6, 0.85, 0.15 * std::cos(phi), 50e3, 0.0);
  PairFit pair = fit_cosine_pair(tx, ty);
  CHECK(pair.frequency_hz == doctest::Approx(50e3).epsilon(1e-9));
  CHECK(pair.x.frequency_hz == pair.y.frequency_hz);
  CHECK(extract_phase(pair.x.amplitude, pair.y.amplitude) == doctest::Approx(phi).epsilon(1e-9));
  CHECK(pair.amplitude_cov == 0.0);

  // a fixed frequency decouples the two fits entirely
  RabiTrace nx = synthetic_trace(24, 1e-6, 0.85, 0.10, 50e3, 0.01, 5);
  RabiTrace ny = synthetic_trace(24, 1e-6, 0.85, 0.10, 50e3, 0.01, 6);
  PairFit pinned = fit_cosine_pair(nx, ny, 50e3);
  CHECK(pinned.amplitude_cov == 0.0);
  PairFit free_f = fit_cosine_pair(nx, ny);
  CHECK(free_f.x.amplitude_sd > 0.0);
}

TEST_CASE("sd scaling fit recovers exact synthetic parameters") {
  std::vector<std::pair<double, double>> points;
  for (double nu : {1e4, 3e4, 1e5, 3e5, 1e6}) points.push_back({nu, 2.0 / std::sqrt(nu) + 0.01});
  FitResult fit = fit_sd_scaling(points);
  CHECK(fit.param("a") == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(fit.param("c") == doctest::Approx(0.01).epsilon(1e-8));
  CHECK(fit.adj_r2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.model == "sd_scaling");
  CHECK_THROWS_AS(fit.param("z"), std::invalid_argument);
}

TEST_CASE("sd scaling fit clamps the floor at zero") {
  // data lying exactly on a line with a negative intercept in 1/sqrt(nu)
  std::vector<std::pair<double, double>> points;
  for (double nu : {1e4, 3e4, 1e5, 3e5, 1e6}) {
    points.push_back({nu, 2.0 / std::sqrt(nu) - 0.001});
  }
  FitResult fit = fit_sd_scaling(points);
  CHECK(fit.param("c") == 0.0);
  CHECK(fit.param("a") > 0.0);
  CHECK(fit.param_sd("c") == 0.0);
}

TEST_CASE("sd scaling fit tolerates relative noise") {
  nvmet::rng::Xoshiro256ss gen(2024);
  std::vector<std::pair<double, double>> points;
  for (double nu : {1e4, 3e4, 1e5, 3e5, 1e6, 3e6}) {
    double sd = 2.0 / std::sqrt(nu) + 0.003;
    points.push_back({nu, sd * (1.0 + 0.01 * gen.gauss())});
  }
  FitResult fit = fit_sd_scaling(points);
  CHECK(fit.param("a") == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sd scaling intervals cover the truth") {
  // homoscedastic noise matches the fit's error model; nominal 95% intervals
  // use the t quantile at n - p = 7 residual degrees of freedom
  double t975 = 2.3646;
  int covered = 0;
  int runs = 200;
  for (int s = 0; s < runs; ++s) {
    nvmet::rng::Xoshiro256ss gen(40000 + s);
    std::vector<std::pair<double, double>> points;
    for (double nu : {1e4, 3e4, 1e5, 3e5, 1e6, 3e6, 1e7, 3e7, 1e8}) {
      double sd = 2.0 / std::sqrt(nu) + 0.02;
      points.push_back({nu, sd + 2e-4 * gen.gauss()});
    }
    FitResult fit = fit_sd_scaling(points);
    if (std::abs(fit.param("a") - 2.0) < t975 * fit.param_sd("a")) ++covered;
  }
  CHECK(covered >= static_cast<int>(0.90 * runs));
}

TEST_CASE("variance scaling fit anchors") {
  std::vector<std::pair<double, double>> exact;
  for (double nu : {1e4, 3e4, 1e5, 3e5}) exact.push_back({nu, 4.0 / nu});
  FitResult fit = fit_variance_scaling(exact);
  CHECK(fit.param("a") == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(fit.param("c") == doctest::Approx(0.0).scale(1e-10));

  std::vector<std::pair<double, double>> constant;
  for (double nu : {1e4, 3e4, 1e5, 3e5}) constant.push_back({nu, 0.25});
  FitResult flat = fit_variance_scaling(constant);
  CHECK(flat.param("a") == doctest::Approx(0.0).scale(1e-8));
  CHECK(flat.param("c") == doctest::Approx(0.25).epsilon(1e-10));

  CHECK_THROWS_AS(fit_variance_scaling({{1e4, 0.1}, {1e4, 0.1}, {3e4, 0.05}}),
                  std::invalid_argument);
}

TEST_CASE("sd and variance fits agree on clean power-law data") {
  nvmet::rng::Xoshiro256ss gen(9);
  std::vector<std::pair<double, double>> sd_pts;
  std::vector<std::pair<double, double>> var_pts;
  for (double nu : {1e4, 3e4, 1e5, 3e5, 1e6}) {
    double sd = (3.0 / std::sqrt(nu)) * (1.0 + 0.01 * gen.gauss());
    sd_pts.push_back({nu, sd});
    var_pts.push_back({nu, sd * sd});
  }
  double a_sd = fit_sd_scaling(sd_pts).param("a");
  double a_var = fit_variance_scaling(var_pts).param("a");
  CHECK(std::sqrt(a_var) == doctest::Approx(a_sd).epsilon(0.10));
}

TEST_CASE("log-log fit reads off exact power laws") {
  std::vector<std::pair<double, double>> points;
  for (double nu : {1e4, 3e4, 1e5, 3e5, 1e6}) points.push_back({nu, std::pow(nu, -0.5)});
  FitResult fit = fit_loglog(points);
  CHECK(fit.param("slope") == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.param("intercept") == doctest::Approx(0.0).scale(1e-10));
  CHECK(fit.adj_r2 == doctest::Approx(1.0).epsilon(1e-12));

  FitResult pinned = fit_loglog(points, std::nullopt, 0.5);
  CHECK(pinned.param("slope") == doctest::Approx(-0.5));
  CHECK(pinned.param_sd("slope") == 0.0);
  CHECK(pinned.param("intercept") == doctest::Approx(0.0).scale(1e-10));
}

TEST_CASE("floor subtraction straightens a floored power law") {
  std::vector<std::pair<double, double>> points;
  for (double nu : {1e4, 3e4, 1e5, 3e5, 1e6, 3e6}) {
    points.push_back({nu, 2.0 / std::sqrt(nu) + 0.01});
  }
  FitResult bent = fit_loglog(points);
  FitResult straight = fit_loglog(points, 0.01);
  CHECK(straight.adj_r2 > bent.adj_r2);
  CHECK(straight.param("slope") == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(std::abs(bent.param("slope")) < 0.5);

  CHECK_THROWS_AS(fit_loglog(points, 0.02), std::invalid_argument);
  std::vector<std::pair<double, double>> three = {{1e4, 0.02}, {1e5, 0.006}, {1e6, 0.002}};
  CHECK_THROWS_AS(fit_loglog(three), std::invalid_argument);
  FitResult ok_with_pin = fit_loglog(three, std::nullopt, 0.5);
  CHECK(ok_with_pin.adj_r2 <= 1.0);
}

TEST_CASE("noiseless pipeline returns the input phase to machine precision") {
  ExperimentModel model = ExperimentModel::noiseless();
  double phi = 30.0 * kDeg;

  PhaseEstimate single = estimate_phase(ProbeKind::Single, phi, 100000, 1, model);
  CHECK(std::abs(single.phi_hat_rad - phi) < 1e-9);
  CHECK(single.sd_rad == 0.0);

  PhaseEstimate ent = estimate_phase(ProbeKind::Entangled, phi, 100000, 1, model);
  CHECK(std::abs(ent.raw_phase_rad - 60.0 * kDeg) < 1e-9);
  CHECK(std::abs(ent.phi_hat_rad - phi) < 1e-9);

  // negative input stays quadrant-correct through the doubling
  PhaseEstimate neg = estimate_phase(ProbeKind::Entangled, -20.0 * kDeg, 100000, 1, model);
  CHECK(std::abs(neg.phi_hat_rad + 20.0 * kDeg) < 1e-9);
}

TEST_CASE("sampled pipeline estimates are reproducible and calibrated") {
  ExperimentModel model = ExperimentModel::ideal();
  double phi = 20.0 * kDeg;

  PhaseEstimate a = estimate_phase(ProbeKind::Entangled, phi, 10000, 77, model);
  PhaseEstimate b = estimate_phase(ProbeKind::Entangled, phi, 10000, 77, model);
  CHECK(a.phi_hat_rad == b.phi_hat_rad);
  CHECK(a.sd_rad == b.sd_rad);
  CHECK(a.sd_rad > 0.0);

  // scatter over seeds matches the reported sd to within statistics
  int n = 24;
  double sum = 0.0;
  double sum_sq = 0.0;
  double sd_sum = 0.0;
  for (int s = 0; s < n; ++s) {
    PhaseEstimate e = estimate_phase(ProbeKind::Entangled, phi, 10000, 100 + s, model);
    sum += e.phi_hat_rad;
    sum_sq += e.phi_hat_rad * e.phi_hat_rad;
    sd_sum += e.sd_rad;
  }
  double mean = sum / n;
  double scatter = std::sqrt((sum_sq - sum * sum / n) / (n - 1));
  double reported = sd_sum / n;
  CHECK(std::abs(mean - phi) < 4.0 * reported / std::sqrt(static_cast<double>(n)));
  CHECK(scatter / reported > 0.55);
  CHECK(scatter / reported < 1.8);

  CHECK_THROWS_AS(estimate_phase(ProbeKind::Single, phi, 999, 1, model),
                  std::invalid_argument);
}

TEST_CASE("entangled probes beat single probes at matched budget") {
  ExperimentModel model = ExperimentModel::ideal();
  double phi = 15.0 * kDeg;
  double single_sd = 0.0;
  double ent_sd = 0.0;
  for (int s = 0; s < 8; ++s) {
    single_sd += estimate_phase(ProbeKind::Single, phi, 30000, 500 + s, model).sd_rad;
    ent_sd += estimate_phase(ProbeKind::Entangled, phi, 30000, 500 + s, model).sd_rad;
  }
  CHECK(ent_sd < single_sd);
}

TEST_CASE("pipeline bound scales as one over root nu and favors entanglement") {
  ExperimentModel model = ExperimentModel::ideal();
  double phi = 20.0 * kDeg;
  double c1 = pipeline_crb(ProbeKind::Entangled, phi, 10000, model);
  double c2 = pipeline_crb(ProbeKind::Entangled, phi, 1000000, model);
  CHECK(c1 / c2 == doctest::Approx(10.0).epsilon(1e-9));

  double cs = pipeline_crb(ProbeKind::Single, phi, 10000, model);
  CHECK(c1 < cs);
  CHECK(cs / c1 == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("systematic drift widens scatter but not the reported sd") {
  ExperimentModel model = ExperimentModel::ideal();
  model.systematic_phase_sd_deg = 2.0;
  double phi = 10.0 * kDeg;
  PhaseEstimate a = estimate_phase(ProbeKind::Entangled, phi, 100000, 3, model);
  ExperimentModel clean = ExperimentModel::ideal();
  PhaseEstimate b = estimate_phase(ProbeKind::Entangled, phi, 100000, 3, model);
  PhaseEstimate c = estimate_phase(ProbeKind::Entangled, phi, 100000, 3, clean);
  CHECK(a.phi_hat_rad == b.phi_hat_rad);
  CHECK(a.phi_hat_rad != c.phi_hat_rad);
  CHECK(a.sd_rad == doctest::Approx(c.sd_rad).epsilon(1e-12));
}

TEST_CASE("serializers emit stable field layouts") {
  PhaseEstimate est;
  est.kind = ProbeKind::Entangled;
  est.phi_hat_rad = 0.5;
  est.sd_rad = 0.01;
  est.raw_phase_rad = 1.0;
  est.raw_sd_rad = 0.02;
  est.nu = 12345;
  std::string text = serialize_estimate(est);
  CHECK(text.find("kind entangled\n") == 0);
  CHECK(text.find("nu 12345\n") != std::string::npos);

  FitResult fit;
  fit.model = "sd_scaling";
  fit.param_names = {"a", "c"};
  fit.params = {2.0, 0.01};
  fit.param_sds = {0.1, 0.001};
  fit.adj_r2 = 0.999;
  std::string ftext = serialize_fit(fit);
  CHECK(ftext.find("model sd_scaling\n") == 0);
  CHECK(ftext.find("param a 2 0.1") != std::string::npos);
}
