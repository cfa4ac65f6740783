#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nvmet/qcore.hpp"
#include "nvmet/rng.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace nvmet::qcore;
using nvmet::rng::Xoshiro256ss;

namespace {

const std::complex<double> kI(0.0, 1.0);

ComplexVector ket(int dim, int level) {
  ComplexVector v = ComplexVector::Zero(dim);
  v[level] = 1.0;
  return v;
}

// random trace-1 PSD matrix via a Wishart-style construction
ComplexMatrix random_density(Xoshiro256ss& g, int dim) {
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = std::complex<double>(g.gauss(), g.gauss());
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint().eval());
}

}  // namespace

TEST_CASE("density matrix constructor enforces physicality") {
  ComplexMatrix ok(2, 2);
  ok << 0.5, 0.25, 0.25, 0.5;
  CHECK_NOTHROW(DensityMatrix{ok});

  ComplexMatrix bad_trace(2, 2);
  bad_trace << 0.6, 0.0, 0.0, 0.6;
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, std::invalid_argument);

  ComplexMatrix not_herm(2, 2);
  not_herm << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(DensityMatrix{not_herm}, std::invalid_argument);

  ComplexMatrix neg_eig(2, 2);
  neg_eig << 0.5, 0.6, 0.6, 0.5;
  CHECK_THROWS_AS(DensityMatrix{neg_eig}, std::invalid_argument);
}

TEST_CASE("pure and diagonal factories") {
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  DensityMatrix rho = DensityMatrix::pure(PureState(plus));
  CHECK(rho.matrix()(0, 1).real() == doctest::Approx(0.5));
  CHECK(rho.purity() == doctest::Approx(1.0));

  Eigen::VectorXd pops(4);
  pops << 0.25, 0.25, 0.25, 0.25;
  DensityMatrix mixed = DensityMatrix::diagonal(pops);
  CHECK(mixed.purity() == doctest::Approx(0.25));
  CHECK(mixed.population(2) == doctest::Approx(0.25));

  ComplexVector unnorm(2);
  unnorm << 1.0, 1.0;
  CHECK_THROWS_AS(PureState{unnorm}, std::invalid_argument);
}

TEST_CASE("phase damping scales off-diagonals and leaves populations alone") {
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  DensityMatrix rho = DensityMatrix::pure(PureState(plus));
  DensityMatrix out = apply_channel(rho, KrausChannel::phase_damping(0.5));
  CHECK(out.matrix()(0, 1).real() == doctest::Approx(0.25));
  CHECK(out.population(0) == doctest::Approx(0.5));
  CHECK(out.population(1) == doctest::Approx(0.5));

  DensityMatrix full = apply_channel(rho, KrausChannel::phase_damping(1.0));
  CHECK(std::abs(full.matrix()(0, 1)) == doctest::Approx(0.0));

  CHECK_THROWS_AS(KrausChannel::phase_damping(1.5), std::invalid_argument);
}

TEST_CASE("multiplier channel acts elementwise on random states") {
  Xoshiro256ss g(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 4;
    // Gram matrix of unit vectors gives a PSD multiplier with unit diagonal
    Eigen::MatrixXd vecs(6, dim);
    for (int j = 0; j < dim; ++j) {
      for (int i = 0; i < 6; ++i) vecs(i, j) = g.gauss();
      vecs.col(j).normalize();
    }
    Eigen::MatrixXd mult = vecs.transpose() * vecs;
    for (int i = 0; i < dim; ++i) mult(i, i) = 1.0;

    DensityMatrix rho(random_density(g, dim));
    DensityMatrix out = apply_channel(rho, KrausChannel::from_multiplier(mult));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        std::complex<double> want = rho.matrix()(i, j) * mult(i, j);
        CHECK(std::abs(out.matrix()(i, j) - want) < 1e-10);
      }
  }
}

TEST_CASE("multiplier channel rejects non-physical multipliers") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 1.2, 1.2, 1.0;
  CHECK_THROWS_AS(KrausChannel::from_multiplier(bad), std::invalid_argument);

  Eigen::MatrixXd bad_diag(2, 2);
  bad_diag << 0.9, 0.1, 0.1, 0.9;
  CHECK_THROWS_AS(KrausChannel::from_multiplier(bad_diag), std::invalid_argument);
}

TEST_CASE("kraus completeness is checked") {
  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(KrausChannel{std::vector<ComplexMatrix>{half}}, std::invalid_argument);
  CHECK_NOTHROW(KrausChannel::identity(4));
}

TEST_CASE("unitary evolution preserves physicality and rejects non-unitaries") {
  Xoshiro256ss g(17);
  DensityMatrix rho(random_density(g, 4));

  double t = 0.3;
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(0, 2) = std::complex<double>(0.4, 0.1);
  h(2, 0) = std::conj(h(0, 2));
  h(1, 1) = 0.7;
  ComplexMatrix u = (-kI * t * h).exp();
  DensityMatrix out = apply_unitary(rho, u);
  CHECK(out.purity() == doctest::Approx(rho.purity()));

  ComplexMatrix not_u = ComplexMatrix::Identity(4, 4) * 1.1;
  CHECK_THROWS_AS(apply_unitary(rho, not_u), std::invalid_argument);
}

TEST_CASE("outcome pdf matches populations for the computational measurement") {
  Eigen::VectorXd pops(4);
  pops << 0.4, 0.3, 0.2, 0.1;
  DensityMatrix rho = DensityMatrix::diagonal(pops);
  Eigen::VectorXd p = outcome_pdf(rho, Povm::computational(4));
  for (int i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(pops[i]));
  CHECK(p.sum() == doctest::Approx(1.0));
}

TEST_CASE("povm constructor validates closure") {
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  CHECK_THROWS_AS(Povm(std::vector<ComplexMatrix>{e0}, {}), std::invalid_argument);
}

TEST_CASE("tensor product uses electron-major index order") {
  // basis index = 2 * electron + nuclear
  ComplexVector e1 = ket(2, 1), n0 = ket(2, 0);
  ComplexVector v = tensor(e1, n0);
  CHECK(std::abs(v[2] - 1.0) < 1e-15);

  ComplexMatrix a(2, 2), b(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  b << 0.0, 1.0, 1.0, 0.0;
  ComplexMatrix m = tensor(a, b);
  CHECK(m.rows() == 4);
  CHECK(std::abs(m(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(m(0, 3) - 2.0) < 1e-15);
  CHECK(std::abs(m(2, 1) - 3.0) < 1e-15);
}

TEST_CASE("partial trace recovers product-state marginals") {
  ComplexVector e(2), n(2);
  e << std::cos(0.3), std::sin(0.3) * std::exp(kI * 0.7);
  n << std::cos(1.0), std::sin(1.0) * std::exp(kI * (-0.2));
  DensityMatrix joint = DensityMatrix::pure(PureState(tensor(e, n)));

  DensityMatrix re = partial_trace(joint, Subsystem::Electron);
  DensityMatrix rn = partial_trace(joint, Subsystem::Nuclear);
  ComplexMatrix we = e * e.adjoint();
  ComplexMatrix wn = n * n.adjoint();
  CHECK((re.matrix() - we).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((rn.matrix() - wn).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace of a maximally entangled state is maximally mixed") {
  ComplexVector bell(4);
  bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  DensityMatrix joint = DensityMatrix::pure(PureState(bell));
  DensityMatrix re = partial_trace(joint, Subsystem::Electron);
  CHECK(re.purity() == doctest::Approx(0.5));
  CHECK(re.population(0) == doctest::Approx(0.5));
}
