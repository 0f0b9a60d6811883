#include "qcrb/matcore.hpp"

#include "qcrb/error.hpp"

#include <cmath>
#include <sstream>

namespace qcrb {

namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double floor_for(const RealVector& eigenvalues) {
  return kSingularFloor * eigenvalues.cwiseAbs().maxCoeff();
}

}  // namespace

double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
double max_abs(const RealMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw Error(ErrorKind::Hermiticity, "matrix must be square and non-empty");
  }
  if (!all_finite(m_)) throw Error(ErrorKind::Hermiticity, "non-finite entry");
  const double dev = max_abs(ComplexMatrix(m_ - m_.adjoint()));
  if (dev > kHermitianTol) {
    std::ostringstream os;
    os << "max |A - A^dagger| = " << dev << " exceeds " << kHermitianTol;
    throw Error(ErrorKind::Hermiticity, os.str());
  }
}

HermitianOperator HermitianOperator::project(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::Hermiticity, "matrix must be square and non-empty");
  }
  if (!all_finite(m)) throw Error(ErrorKind::Hermiticity, "non-finite entry");
  return HermitianOperator(ComplexMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::from_real(const RealMatrix& m) {
  return HermitianOperator(ComplexMatrix(m.cast<cplx>()));
}

EigDecomposition eig_hermitian(const HermitianOperator& a) {
  // Eigen's self-adjoint solver wants column-major storage.
  const Eigen::MatrixXcd col = a.mat();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(col);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergence, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianOperator mat_func(const HermitianOperator& a, MatFunc f) {
  auto [vals, vecs] = eig_hermitian(a);
  const double floor = floor_for(vals);
  RealVector out(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    double v = vals(i);
    switch (f) {
      case MatFunc::Sqrt:
        if (v < -kPsdClamp) {
          std::ostringstream os;
          os << "sqrt of non-PSD matrix, eigenvalue " << v;
          throw Error(ErrorKind::Parameter, os.str());
        }
        out(i) = std::sqrt(std::max(v, 0.0));
        break;
      case MatFunc::Abs:
        out(i) = std::abs(v);
        break;
      case MatFunc::Inv:
      case MatFunc::InvSqrt:
        if (v <= floor) {
          std::ostringstream os;
          os << "eigenvalue " << v << " at or below singular floor " << floor;
          throw Error(ErrorKind::SingularMatrix, os.str());
        }
        out(i) = f == MatFunc::Inv ? 1.0 / v : 1.0 / std::sqrt(v);
        break;
    }
  }
  ComplexMatrix r = vecs * out.cast<cplx>().asDiagonal() * vecs.adjoint();
  return HermitianOperator::project(r);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::project(kron(a.mat(), b.mat()));
}

ComplexMatrix kron_power(const ComplexMatrix& a, int n) {
  ComplexMatrix out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

double trace_abs(const HermitianOperator& a) {
  return eig_hermitian(a).eigenvalues.cwiseAbs().sum();
}

RealMatrix sym_func(const RealMatrix& a, MatFunc f) {
  return mat_func(HermitianOperator::project(a.cast<cplx>()), f).real();
}

double min_eigenvalue(const RealMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(0.5 * (a + a.transpose())),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double min_eigenvalue(const HermitianOperator& a) { return eig_hermitian(a).eigenvalues(0); }

}  // namespace qcrb
