#include "nvmet/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace nvmet::infotheory {

namespace {

constexpr double kRichardsonTol = 1e-4;

Eigen::VectorXd outcome_derivative(const StateFamily& family, const qcore::Povm& povm,
                                   double phi, double dphi) {
  if (family.has_analytic_derivative()) {
    qcore::ComplexMatrix drho = family.derivative(phi);
    Eigen::VectorXd dp(povm.size());
    for (int i = 0; i < povm.size(); ++i) {
      dp(i) = (povm.element(i) * drho).trace().real();
    }
    return dp;
  }
  Eigen::VectorXd up = qcore::outcome_pdf(family.evaluate(phi + dphi), povm);
  Eigen::VectorXd dn = qcore::outcome_pdf(family.evaluate(phi - dphi), povm);
  return (up - dn) / (2.0 * dphi);
}

double fisher_at_step(const StateFamily& family, const qcore::Povm& povm, double phi,
                      double dphi) {
  Eigen::VectorXd p = qcore::outcome_pdf(family.evaluate(phi), povm);
  Eigen::VectorXd dp = outcome_derivative(family, povm, phi, dphi);
  double fisher = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) < kProbabilityFloor) continue;
    fisher += dp(i) * dp(i) / p(i);
  }
  return fisher;
}

qcore::ComplexVector checked_amplitudes(const PureFamily& family, double phi) {
  qcore::ComplexVector psi = family.evaluate(phi);
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) {
    throw std::invalid_argument("pure family state is not normalized");
  }
  return psi;
}

double qfi_at_step(const PureFamily& family, double phi, double dphi) {
  qcore::ComplexVector mid = checked_amplitudes(family, phi);
  qcore::ComplexVector up = checked_amplitudes(family, phi + dphi);
  qcore::ComplexVector dn = checked_amplitudes(family, phi - dphi);
  qcore::ComplexVector dpsi = (up - dn) / (2.0 * dphi);
  double grad = dpsi.squaredNorm();
  double overlap = std::norm(mid.dot(dpsi));
  return 4.0 * (grad - overlap);
}

void check_steps(double coarse, double fine, const char* what) {
  if (std::abs(coarse - fine) > kRichardsonTol * std::max(std::abs(fine), 1.0)) {
    throw std::runtime_error(std::string(what) +
                             " did not converge under step halving; the family is not smooth "
                             "at this phase");
  }
}

}  // namespace

void CrbReport::validate() const {
  if (!(fisher >= 0.0)) throw std::invalid_argument("fisher information must be non-negative");
  if (fisher > qfi + 1e-8) {
    throw std::invalid_argument("fisher information exceeds the quantum bound");
  }
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw std::invalid_argument("bound must be finite and positive");
  }
  if (nu < 1) throw std::invalid_argument("nu must be at least 1");
}

double fisher_information(const StateFamily& family, const qcore::Povm& povm, double phi,
                          double dphi) {
  if (!(dphi > 0.0)) throw std::invalid_argument("dphi must be positive");
  if (!family.evaluate) throw std::invalid_argument("family has no evaluator");
  if (family.has_analytic_derivative()) {
    return fisher_at_step(family, povm, phi, dphi);
  }
  double coarse = fisher_at_step(family, povm, phi, dphi);
  double fine = fisher_at_step(family, povm, phi, 0.5 * dphi);
  check_steps(coarse, fine, "fisher information");
  return fine;
}

double qfi_pure(const PureFamily& family, double phi, double dphi) {
  if (!(dphi > 0.0)) throw std::invalid_argument("dphi must be positive");
  if (!family.evaluate) throw std::invalid_argument("family has no evaluator");
  double coarse = qfi_at_step(family, phi, dphi);
  double fine = qfi_at_step(family, phi, 0.5 * dphi);
  check_steps(coarse, fine, "quantum fisher information");
  return fine;
}

double crb(double fisher, std::uint64_t nu) {
  if (!(fisher > 0.0)) throw std::invalid_argument("fisher information must be positive");
  if (nu < 1) throw std::invalid_argument("nu must be at least 1");
  return 1.0 / std::sqrt(static_cast<double>(nu) * fisher);
}

CrbReport crb_report(double fisher, double qfi, std::uint64_t nu) {
  CrbReport report;
  report.fisher = fisher;
  report.qfi = qfi;
  report.nu = nu;
  report.bound = crb(fisher, nu);
  report.validate();
  return report;
}

const char* probe_name(Probe kind) {
  return kind == Probe::Separable ? "separable" : "ghz";
}

PureFamily probe_family(int n_qubits, Probe kind) {
  if (n_qubits < 1 || n_qubits > 4) {
    throw std::invalid_argument("probe registers support 1 to 4 qubits");
  }
  int dim = 1 << n_qubits;
  PureFamily family;
  family.dim = dim;
  if (kind == Probe::Ghz) {
    family.evaluate = [n_qubits, dim](double phi) {
      qcore::ComplexVector psi = qcore::ComplexVector::Zero(dim);
      double amp = 1.0 / std::sqrt(2.0);
      psi(0) = amp;
      psi(dim - 1) = amp * std::exp(qcore::Complex(0.0, -n_qubits * phi));
      return psi;
    };
  } else {
    family.evaluate = [n_qubits, dim](double phi) {
      qcore::ComplexVector psi(dim);
      double amp = std::pow(2.0, -0.5 * n_qubits);
      for (int b = 0; b < dim; ++b) {
        int excited = __builtin_popcount(static_cast<unsigned>(b));
        psi(b) = amp * std::exp(qcore::Complex(0.0, -phi * excited));
      }
      return psi;
    };
  }
  return family;
}

StateFamily as_density_family(const PureFamily& family) {
  StateFamily out;
  out.dim = family.dim;
  out.evaluate = [family](double phi) {
    return qcore::DensityMatrix::pure(qcore::PureState(family.evaluate(phi)));
  };
  return out;
}

std::vector<ScalingRow> scaling_table(int n_max, Probe kind, std::uint64_t nu) {
  if (n_max < 1 || n_max > 4) {
    throw std::invalid_argument("scaling table covers 1 to 4 qubits");
  }
  // generic reference phase away from any measurement node
  double phi_ref = 0.3;
  std::vector<ScalingRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    double qfi = qfi_pure(probe_family(n, kind), phi_ref);
    double closed = kind == Probe::Ghz ? static_cast<double>(n) * n : static_cast<double>(n);
    if (std::abs(qfi - closed) > 1e-6 * closed) {
      throw std::runtime_error("scaling table row disagrees with the closed form");
    }
    rows.push_back({n, qfi, crb(qfi, nu)});
  }
  return rows;
}

std::string serialize_scaling_table(const std::vector<ScalingRow>& rows) {
  std::string out = "# n\tqfi\tbound\n";
  for (const ScalingRow& row : rows) {
    char line[96];
    std::snprintf(line, sizeof line, "%d\t%.17g\t%.17g\n", row.n_qubits, row.qfi, row.bound);
    out += line;
  }
  return out;
}

}  // namespace nvmet::infotheory
