#pragma once

#include "qcrb/bounds.hpp"
#include "qcrb/families.hpp"
#include "qcrb/matcore.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qcrb::test {

inline constexpr double kPi = std::numbers::pi;
inline const cplx I{0.0, 1.0};

inline ComplexMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline HermitianOperator herm2(cplx a, cplx b, cplx c, cplx d) {
  return HermitianOperator(mat2(a, b, c, d));
}

inline ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(v.size(), v.size());
  int k = 0;
  for (double x : v) m(k, k) = x, ++k;
  return m;
}

// Random symmetric positive definite matrix with eigenvalues in [lo, hi].
inline RealMatrix random_spd(int d, std::mt19937_64& rng, double lo = 0.2, double hi = 3.0) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(lo, hi);
  RealMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = n(rng);
  Eigen::HouseholderQR<RealMatrix> qr(a);
  RealMatrix q = qr.householderQ();
  RealVector lam(d);
  for (int i = 0; i < d; ++i) lam(i) = u(rng);
  RealMatrix out = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

// Random symmetric PSD matrix of the given rank.
inline RealMatrix random_psd(int d, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  RealMatrix b(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) b(i, j) = n(rng);
  RealMatrix out = b * b.transpose();
  return 0.5 * (out + out.transpose());
}

// Random Hermitian positive definite matrix.
inline ComplexMatrix random_hpd(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = cplx(n(rng), n(rng));
  ComplexMatrix out = b * b.adjoint() + 0.1 * ComplexMatrix::Identity(d, d);
  return 0.5 * (out + out.adjoint());
}

// Interior qubit point for a family: radius away from 0 and 1, angles away
// from the poles so the Bloch parametrization stays regular.
inline ParamPoint random_qubit_point(const StateFamily& f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.1, 0.9);
  std::uniform_real_distribution<double> th(0.3, kPi - 0.3);
  std::uniform_real_distribution<double> ph(0.1, 2 * kPi - 0.1);
  if (std::holds_alternative<QubitFull>(f.kind())) return {r(rng), th(rng), ph(rng)};
  if (std::holds_alternative<QubitRFixed>(f.kind())) return {th(rng), ph(rng)};
  return {r(rng), th(rng)};
}

inline double g_formula_c(double r0, double g1, double g2, double g3) {
  return (2.0 / (r0 * r0)) * (g1 + std::sqrt(g1 * g1 - g2 * g2 - g3 * g3));
}

inline double g_formula_ca(double r0, double g1, double g2, double g3) {
  return (2.0 / (r0 * r0)) * (g1 + r0 * std::sqrt(g1 * g1 - g2 * g2 - g3 * g3));
}

}  // namespace qcrb::test
