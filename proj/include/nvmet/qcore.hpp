#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

// Dense finite-dimensional quantum state algebra: density matrices with
// validated invariants, Kraus channels, POVMs, tensor products and partial
// traces over the electron (x) nuclear factorization. Dimensions in this
// project are 2 and 4 for the simulated system and up to 16 for probe-state
// scaling studies.
namespace nvmet::qcore {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// validation tolerances, shared project-wide
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenFloor = -1e-10;  // min admissible eigenvalue
inline constexpr double kSumTol = 1e-10;       // Kraus/POVM completeness, unitarity

bool all_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& m, double tol = kSumTol);

class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);
  int dim() const { return static_cast<int>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }

 private:
  ComplexVector amps_;
};

class DensityMatrix {
 public:
  // validates Hermiticity, unit trace, positivity and finiteness
  explicit DensityMatrix(ComplexMatrix rho);
  static DensityMatrix pure(const PureState& psi);
  static DensityMatrix diagonal(const Eigen::VectorXd& populations);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const ComplexMatrix& matrix() const { return rho_; }
  double population(int level) const;
  double purity() const;

 private:
  ComplexMatrix rho_;
};

class KrausChannel {
 public:
  // validates matching dims and completeness sum_k K^dag K = I
  explicit KrausChannel(std::vector<ComplexMatrix> ops);
  static KrausChannel identity(int dim);
  // single-qubit phase damping: off-diagonal scaled by (1 - lambda)
  static KrausChannel phase_damping(double lambda);
  // dephasing channel from a positive semidefinite Hadamard multiplier matrix
  // with unit diagonal: rho_ij -> m_ij * rho_ij
  static KrausChannel from_multiplier(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(ops_.front().rows()); }
  const std::vector<ComplexMatrix>& ops() const { return ops_; }

 private:
  std::vector<ComplexMatrix> ops_;
};

class Povm {
 public:
  // validates Hermiticity, positivity and completeness of the elements
  explicit Povm(std::vector<ComplexMatrix> elements, std::vector<std::string> labels = {});
  static Povm computational(int dim);

  int dim() const { return static_cast<int>(elements_.front().rows()); }
  int size() const { return static_cast<int>(elements_.size()); }
  const ComplexMatrix& element(int i) const { return elements_.at(i); }
  const std::string& label(int i) const { return labels_.at(i); }

 private:
  std::vector<ComplexMatrix> elements_;
  std::vector<std::string> labels_;
};

// u rho u^dag; throws if u is not unitary within kSumTol
DensityMatrix apply_unitary(const DensityMatrix& state, const ComplexMatrix& u);
DensityMatrix apply_channel(const DensityMatrix& state, const KrausChannel& channel);

// Outcome probabilities tr(E_i rho), clipped to [0, 1]; throws if any
// probability is below -1e-12 or the total deviates from 1 by more than kSumTol.
Eigen::VectorXd outcome_pdf(const DensityMatrix& state, const Povm& povm);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

// Subsystem labels for the 4-level system, ordered electron (x) nuclear:
// index = 2*e + n with e,n in {0,1}.
enum class Subsystem { Electron, Nuclear };
DensityMatrix partial_trace(const DensityMatrix& state, Subsystem keep);

}  // namespace nvmet::qcore
