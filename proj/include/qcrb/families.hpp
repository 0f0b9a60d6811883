#pragma once

#include "qcrb/matcore.hpp"

#include <string>
#include <variant>
#include <vector>

namespace qcrb {

struct QubitFull {
  bool operator==(const QubitFull&) const = default;
};
struct QubitRFixed {
  double r0;
  bool operator==(const QubitRFixed&) const = default;
};
struct QubitPhiZero {
  bool operator==(const QubitPhiZero&) const = default;
};
/// Coherent light in thermal noise: mean thermal photon number N, Fock cutoff.
struct DisplacedThermal {
  double mean_photons;
  int fock_dim;
  bool operator==(const DisplacedThermal&) const = default;
};

using FamilyKind = std::variant<QubitFull, QubitRFixed, QubitPhiZero, DisplacedThermal>;

/// One of the four supported state families. Immutable once built.
///
/// Parameter order:
///   QubitFull       (r, theta, phi)
///   QubitRFixed     (theta, phi)
///   QubitPhiZero    (r, theta)
///   DisplacedThermal (Re alpha, Im alpha)
class StateFamily {
 public:
  explicit StateFamily(FamilyKind kind);

  /// Parses `full`, `r-fixed:<r0>`, `phi-zero`, `thermal:<N>:<fock_dim>`.
  static StateFamily parse(const std::string& spec);

  const FamilyKind& kind() const noexcept { return kind_; }
  int param_dim() const noexcept;
  int hilbert_dim() const noexcept;
  bool is_qubit() const noexcept { return !std::holds_alternative<DisplacedThermal>(kind_); }
  std::string name() const;
  std::vector<std::string> param_names() const;

  bool operator==(const StateFamily&) const = default;

 private:
  FamilyKind kind_;
};

using ParamPoint = std::vector<double>;

struct FamilyAtPoint {
  HermitianOperator rho;
  std::vector<HermitianOperator> derivs;
  int param_dim() const { return static_cast<int>(derivs.size()); }
  Eigen::Index dim() const { return rho.dim(); }
};

/// Thermal states also report the Fock-space mass discarded by truncation.
struct StateEval {
  HermitianOperator rho;
  double tail_mass = 0.0;
};

inline constexpr double kMaxTailMass = 1e-6;

StateEval eval_state_with_tail(const StateFamily& family, const ParamPoint& theta);
HermitianOperator eval_state(const StateFamily& family, const ParamPoint& theta);

/// Analytic derivatives for the qubit kinds; Richardson-extrapolated central
/// differences for the thermal kind.
FamilyAtPoint eval_derivs(const StateFamily& family, const ParamPoint& theta);

inline constexpr int kMaxIidDim = 64;

/// Tensor power rho^{(n)} with product-rule derivatives.
FamilyAtPoint extend_iid(const FamilyAtPoint& fp, int n);

/// Truncated Fock-space ladder operator a (dimension dim).
ComplexMatrix annihilation(int dim);

/// exp(alpha a^dagger - conj(alpha) a) on the truncated space, via the
/// eigendecomposition of the Hermitian generator.
ComplexMatrix displacement(int dim, cplx alpha);

/// Truncated coherent-state amplitudes <k|beta>, k < dim.
ComplexVector coherent_state(int dim, cplx beta);

}  // namespace qcrb
