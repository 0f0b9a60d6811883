#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qcrb {

using cplx = std::complex<double>;

/// Dense complex square matrix, row-major. Every operator in the library
/// (states, derivatives, SLDs, POVM elements) is stored this way.
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSingularFloor = 1e-10;  // relative to max |eigenvalue|
inline constexpr double kPsdClamp = 1e-12;

/// Largest absolute entry.
double max_abs(const ComplexMatrix& a);
double max_abs(const RealMatrix& a);

/// Square complex matrix with A = A^dagger (entrywise, absolute 1e-12) and
/// finite entries. Construction validates; use `project` for results that are
/// Hermitian in exact arithmetic but carry rounding asymmetry.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m);

  /// (m + m^dagger) / 2, no tolerance check. Entries must still be finite.
  static HermitianOperator project(const ComplexMatrix& m);
  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator zero(Eigen::Index dim);
  static HermitianOperator from_real(const RealMatrix& m);

  const ComplexMatrix& mat() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  /// Real part as a real symmetric matrix.
  RealMatrix real() const { return m_.real(); }

 private:
  struct Unchecked {};
  HermitianOperator(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

struct EigDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns, unitary
};

EigDecomposition eig_hermitian(const HermitianOperator& a);

enum class MatFunc { Sqrt, InvSqrt, Inv, Abs };

/// Applies f to the eigenvalues in the eigenbasis of a.
///
/// Sqrt clamps eigenvalues in [-1e-12, 0) to zero and rejects anything more
/// negative. Inv and InvSqrt reject eigenvalues at or below 1e-10 times the
/// largest |eigenvalue| (no regularization).
HermitianOperator mat_func(const HermitianOperator& a, MatFunc f);

/// Kronecker product in the standard block layout.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

/// Trace norm: sum of |eigenvalues|.
double trace_abs(const HermitianOperator& a);

/// Real-symmetric helpers used by the bound formulas.
RealMatrix sym_func(const RealMatrix& a, MatFunc f);
double min_eigenvalue(const RealMatrix& a);
double min_eigenvalue(const HermitianOperator& a);

/// n-fold tensor power.
ComplexMatrix kron_power(const ComplexMatrix& a, int n);

}  // namespace qcrb
