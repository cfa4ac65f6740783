#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nvmet/qcore.hpp"
#include "nvmet/readout.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace nvmet::readout;
using nvmet::qcore::DensityMatrix;

namespace {

DensityMatrix diagonal_p0(double p0) {
  Eigen::VectorXd pops(4);
  pops << p0 / 2, p0 / 2, (1 - p0) / 2, (1 - p0) / 2;
  return DensityMatrix::diagonal(pops);
}

std::vector<double> grid(int n, double dt) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = (i + 1) * dt;
  return out;
}

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("expected ratio anchors and affinity") {
  ReadoutModel model;
  CHECK(expected_ratio(diagonal_p0(1.0), model) == doctest::Approx(1.0));
  CHECK(expected_ratio(diagonal_p0(0.0), model) == doctest::Approx(0.70));
  CHECK(expected_ratio(diagonal_p0(0.5), model) == doctest::Approx(0.85));

  // affine in p0: interpolates exactly
  for (double p : {0.1, 0.37, 0.93}) {
    double want = 0.70 + 0.30 * p;
    CHECK(expected_ratio(diagonal_p0(p), model) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("model validation rejects out-of-range fields") {
  ReadoutModel model;
  model.contrast = 0.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
  model.contrast = 1.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
  model = ReadoutModel{};
  model.window_s = 0.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
  model = ReadoutModel{};
  model.bright_rate_cps = -1.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
}

TEST_CASE("photon budget matches rate times window") {
  ReadoutModel model;
  CHECK(model.photons_per_shot() == doctest::Approx(0.075));
}

TEST_CASE("shot sampling is reproducible and centered") {
  ReadoutModel model;
  DensityMatrix bright = diagonal_p0(1.0);

  ShotRecord a = sample_shots(bright, model, 1000000, 42);
  ShotRecord b = sample_shots(bright, model, 1000000, 42);
  CHECK(a.signal_counts == b.signal_counts);
  CHECK(a.reference_counts == b.reference_counts);

  ShotRecord c = sample_shots(bright, model, 1000000, 43);
  CHECK((c.signal_counts != a.signal_counts || c.reference_counts != a.reference_counts));

  // nu * 0.075 = 75000 expected photons in each window, sigma ~ 274
  double mean = 75000.0;
  double sigma = std::sqrt(mean);
  CHECK(std::abs(static_cast<double>(a.signal_counts) - mean) < 5 * sigma);
  CHECK(std::abs(static_cast<double>(a.reference_counts) - mean) < 5 * sigma);

  // law of large numbers: normalized ratio near the expected ratio
  DensityMatrix half = diagonal_p0(0.5);
  ShotRecord r = sample_shots(half, model, 1000000, 7);
  double ratio_sigma = std::sqrt(0.85 * (1.0 + 0.85) / mean);
  CHECK(std::abs(normalized_ratio(r) - 0.85) < 3 * ratio_sigma);

  CHECK_THROWS_AS(sample_shots(bright, model, 0, 1), std::invalid_argument);
}

TEST_CASE("analytic trace lies exactly on the model curve") {
  ReadoutModel model;
  auto family = [](double t) {
    double p0 = 0.5 + 0.4 * std::cos(2 * M_PI * 50e3 * t);
    return diagonal_p0(p0);
  };
  std::vector<double> durations = grid(12, 2e-6);
  RabiTrace trace = measure_trace(durations, family, model, 10000, 10, 5, false);
  for (std::size_t i = 0; i < durations.size(); ++i) {
    double p0 = 0.5 + 0.4 * std::cos(2 * M_PI * 50e3 * durations[i]);
    CHECK(trace.means[i] == doctest::Approx(1.0 - 0.3 * (1.0 - p0)).epsilon(1e-14));
    CHECK(trace.sds[i] == 0.0);
  }
}

TEST_CASE("trace preconditions") {
  ReadoutModel model;
  auto family = [](double) { return diagonal_p0(1.0); };
  CHECK_THROWS_AS(measure_trace(grid(7, 1e-6), family, model, 1000, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(measure_trace(grid(8, 1e-6), family, model, 1000, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(measure_trace(grid(8, 1e-6), family, model, 5, 10, 1),
                  std::invalid_argument);
  std::vector<double> unsorted = grid(8, 1e-6);
  std::swap(unsorted[2], unsorted[3]);
  CHECK_THROWS_AS(measure_trace(unsorted, family, model, 1000, 10, 1), std::invalid_argument);
}

TEST_CASE("trace sampling is deterministic and block-resolved") {
  ReadoutModel model;
  auto family = [](double t) {
    return diagonal_p0(0.5 + 0.5 * std::cos(2 * M_PI * 50e3 * t));
  };
  std::vector<double> durations = grid(10, 2e-6);
  RabiTrace a = measure_trace(durations, family, model, 100003, 10, 77);
  RabiTrace b = measure_trace(durations, family, model, 100003, 10, 77);
  CHECK(a.means == b.means);
  CHECK(a.sds == b.sds);
  for (double sd : a.sds) CHECK(sd > 0.0);

  RabiTrace c = measure_trace(durations, family, model, 100003, 10, 78);
  CHECK(a.means != c.means);
}

TEST_CASE("block SD shrinks as the square root of the repeat budget") {
  ReadoutModel model;
  auto family = [](double t) {
    return diagonal_p0(0.5 + 0.5 * std::cos(2 * M_PI * 50e3 * t));
  };
  std::vector<double> durations = grid(24, 1e-6);
  RabiTrace small = measure_trace(durations, family, model, 10000, 10, 11);
  RabiTrace large = measure_trace(durations, family, model, 1000000, 10, 12);
  double slope = std::log(rms(small.sds) / rms(large.sds)) / std::log(100.0);
  CHECK(slope == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("trace serialization round-trips") {
  ReadoutModel model;
  auto family = [](double t) {
    return diagonal_p0(0.5 + 0.5 * std::cos(2 * M_PI * 50e3 * t));
  };
  std::vector<double> durations = grid(9, 1.7e-6);
  RabiTrace trace = measure_trace(durations, family, model, 4321, 3, 99);
  RabiTrace back = parse_trace(serialize_trace(trace));
  CHECK(back.nu == trace.nu);
  CHECK(back.blocks == trace.blocks);
  CHECK(back.durations_s == trace.durations_s);
  CHECK(back.means == trace.means);
  CHECK(back.sds == trace.sds);

  CHECK_THROWS_AS(parse_trace("1e-6\t0.9\t0.01\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_trace("# nu 10 blocks 2\n1e-6\t0.9\n"), std::invalid_argument);
}
