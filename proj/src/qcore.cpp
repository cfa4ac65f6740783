#include "nvmet/qcore.hpp"

#include <cmath>
#include <stdexcept>

namespace nvmet::qcore {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  ComplexMatrix d = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

PureState::PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) throw std::invalid_argument("PureState: dim must be >= 2");
  for (Eigen::Index i = 0; i < amps_.size(); ++i)
    if (!std::isfinite(amps_[i].real()) || !std::isfinite(amps_[i].imag()))
      throw std::invalid_argument("PureState: non-finite amplitude");
  if (std::abs(amps_.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("PureState: amplitudes not normalized");
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2)
    throw std::invalid_argument("DensityMatrix: must be square with dim >= 2");
  if (!all_finite(rho_)) throw std::invalid_argument("DensityMatrix: non-finite entry");
  if (!is_hermitian(rho_, kHermitianTol))
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
  if (std::abs(rho_.trace().real() - 1.0) > kTraceTol || std::abs(rho_.trace().imag()) > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 beyond 1e-12");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenFloor)
    throw std::invalid_argument("DensityMatrix: eigenvalue below -1e-10");
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  const ComplexVector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const Eigen::VectorXd& populations) {
  ComplexMatrix rho = ComplexMatrix::Zero(populations.size(), populations.size());
  for (Eigen::Index i = 0; i < populations.size(); ++i) rho(i, i) = populations[i];
  return DensityMatrix(std::move(rho));
}

double DensityMatrix::population(int level) const {
  if (level < 0 || level >= dim()) throw std::invalid_argument("population: level out of range");
  return rho_(level, level).real();
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw std::invalid_argument("KrausChannel: empty operator set");
  const Eigen::Index d = ops_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : ops_) {
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("KrausChannel: mismatched operator dimensions");
    if (!all_finite(k)) throw std::invalid_argument("KrausChannel: non-finite entry");
    sum += k.adjoint() * k;
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kSumTol)
    throw std::invalid_argument("KrausChannel: completeness violated beyond 1e-10");
}

KrausChannel KrausChannel::identity(int dim) {
  return KrausChannel({ComplexMatrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::phase_damping(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("phase_damping: lambda must be in [0, 1]");
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 1.0 - lambda, 1.0 - lambda, 1.0;
  return from_multiplier(m);
}

KrausChannel KrausChannel::from_multiplier(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("from_multiplier: matrix not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("from_multiplier: matrix not symmetric");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (std::abs(m(i, i) - 1.0) > 1e-12)
      throw std::invalid_argument("from_multiplier: diagonal must be 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    double lam = es.eigenvalues()[k];
    if (lam < -1e-9)
      throw std::invalid_argument("from_multiplier: multiplier matrix not positive semidefinite");
    if (lam < 1e-15) continue;
    ComplexMatrix op = ComplexMatrix::Zero(m.rows(), m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      op(i, i) = std::sqrt(lam) * es.eigenvectors()(i, k);
    ops.push_back(std::move(op));
  }
  return KrausChannel(std::move(ops));
}

Povm::Povm(std::vector<ComplexMatrix> elements, std::vector<std::string> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) throw std::invalid_argument("Povm: empty element set");
  const Eigen::Index d = elements_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : elements_) {
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("Povm: mismatched element dimensions");
    if (!is_hermitian(e, 1e-10)) throw std::invalid_argument("Povm: element not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kEigenFloor)
      throw std::invalid_argument("Povm: element not positive semidefinite");
    sum += e;
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kSumTol)
    throw std::invalid_argument("Povm: elements do not sum to identity within 1e-10");
  if (labels_.empty()) {
    labels_.resize(elements_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) labels_[i] = "outcome" + std::to_string(i);
  }
  if (labels_.size() != elements_.size())
    throw std::invalid_argument("Povm: label count must match element count");
}

Povm Povm::computational(int dim) {
  std::vector<ComplexMatrix> els;
  std::vector<std::string> labels;
  for (int i = 0; i < dim; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(i, i) = 1.0;
    els.push_back(std::move(e));
    labels.push_back("level" + std::to_string(i));
  }
  return Povm(std::move(els), std::move(labels));
}

DensityMatrix apply_unitary(const DensityMatrix& state, const ComplexMatrix& u) {
  if (u.rows() != state.dim() || u.cols() != state.dim())
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  if (!is_unitary(u, kSumTol))
    throw std::invalid_argument("apply_unitary: matrix not unitary within 1e-10");
  ComplexMatrix out = u * state.matrix() * u.adjoint();
  // rounding can leave ~1e-16 asymmetry; re-symmetrize before validation
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out));
}

DensityMatrix apply_channel(const DensityMatrix& state, const KrausChannel& channel) {
  if (channel.dim() != state.dim())
    throw std::invalid_argument("apply_channel: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(state.dim(), state.dim());
  for (const auto& k : channel.ops()) out += k * state.matrix() * k.adjoint();
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out));
}

Eigen::VectorXd outcome_pdf(const DensityMatrix& state, const Povm& povm) {
  if (povm.dim() != state.dim()) throw std::invalid_argument("outcome_pdf: dimension mismatch");
  Eigen::VectorXd p(povm.size());
  double total = 0.0;
  for (int i = 0; i < povm.size(); ++i) {
    double pi = (povm.element(i) * state.matrix()).trace().real();
    if (pi < -1e-12) throw std::runtime_error("outcome_pdf: probability below -1e-12");
    pi = std::min(std::max(pi, 0.0), 1.0);
    p[i] = pi;
    total += pi;
  }
  if (std::abs(total - 1.0) > kSumTol)
    throw std::runtime_error("outcome_pdf: probabilities do not sum to 1 within 1e-10");
  return p;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& state, Subsystem keep) {
  if (state.dim() != 4)
    throw std::invalid_argument("partial_trace: expects the 4-level electron-nuclear system");
  const ComplexMatrix& r = state.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  if (keep == Subsystem::Electron) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int n = 0; n < 2; ++n) out(i, j) += r(2 * i + n, 2 * j + n);
  } else {
    for (int n = 0; n < 2; ++n)
      for (int m = 0; m < 2; ++m)
        for (int e = 0; e < 2; ++e) out(n, m) += r(2 * e + n, 2 * e + m);
  }
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out));
}

}  // namespace nvmet::qcore
