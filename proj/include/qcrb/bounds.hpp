#pragma once

#include "qcrb/families.hpp"
#include "qcrb/infogeo.hpp"
#include "qcrb/matcore.hpp"

#include <optional>
#include <string>

namespace qcrb {

/// Real symmetric PSD weight matrix G defining the risk tr(G V).
class WeightMatrix {
 public:
  explicit WeightMatrix(RealMatrix g);

  /// G = [[g1 + g2, g3], [g3, g1 - g2]].
  static WeightMatrix from_g(double g1, double g2, double g3);
  static WeightMatrix identity(int d);

  const RealMatrix& mat() const noexcept { return g_; }
  int dim() const noexcept { return static_cast<int>(g_.rows()); }
  bool positive_definite() const;

  struct Coords {
    double g1, g2, g3;
  };
  /// Only for d = 2.
  Coords coords() const;

 private:
  RealMatrix g_;
};

// ---------------------------------------------------------------------------
// RLD bound

/// max tr(J~^{-1} G') over Hermitian G' >= 0 that agree with G on real
/// symmetric matrices, evaluated in closed form:
///   tr(Re(J~^{-1}) G) + || sqrt(G) Im(J~^{-1}) sqrt(G) ||_1
double rld_bound_closed(const FisherMatrix& rld, const WeightMatrix& g);

struct OracleOptions {
  int max_iters = 500;  // total Newton steps per start
  int starts = 3;
  unsigned seed = 12345;
};

struct OracleResult {
  double value;
  RealMatrix antisym;  // A in G' = G + iA at the optimum
  int iterations;
};

/// Direct maximization of the same objective over the antisymmetric part A
/// of G' = G + iA, by log-barrier Newton ascent restricted to the support of G.
/// Throws OracleFailure (with the best value seen) if a start fails to
/// converge within max_iters.
OracleResult rld_bound_oracle(const FisherMatrix& rld, const WeightMatrix& g,
                              const OracleOptions& opts = {});

// ---------------------------------------------------------------------------
// Attainable and asymptotic bounds

struct AttainableBound {
  double value;
  /// Minimizing W* = sqrt(B) / tr sqrt(B), B = J^{-1/2} G J^{-1/2}; absent when G = 0.
  std::optional<RealMatrix> optimal_w;
};

/// (tr sqrt(J^{-1/2} G J^{-1/2}))^2, the qubit attainable bound.
AttainableBound qubit_attainable_C(const FisherMatrix& sld, const WeightMatrix& g);

enum class Provenance { ClosedForm, Oracle, PaperClaim, NotAvailable };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct BoundValue {
  std::optional<double> value;
  Provenance provenance = Provenance::NotAvailable;
};

/// Asymptotic bound for the given family kind; rld may be absent at pure states.
BoundValue asymptotic_C_A(const StateFamily& family, const FisherMatrix& sld,
                          const std::optional<FisherMatrix>& rld, const WeightMatrix& g);

/// Asymptotic bound of the r-fixed qubit family written invariantly:
/// tr B + 2 r0 sqrt(det B), B = J^{-1/2} G J^{-1/2}. At (pi/2, 0) this is
/// (2 / r0^2)(g1 + r0 sqrt(g1^2 - g2^2 - g3^2)).
double rfixed_asymptotic(double r0, const FisherMatrix& sld, const WeightMatrix& g);

/// Bloch radius above which the RLD path is not used.
inline constexpr double kRldRadiusCap = 1.0 - 1e-6;
inline constexpr double kOrderingTol = 1e-9;

struct BoundReport {
  StateFamily family;
  ParamPoint theta0;
  WeightMatrix g;
  FisherMatrix sld;
  std::optional<FisherMatrix> rld;
  BoundValue c;
  BoundValue c_a;
  BoundValue c_r;
  bool ordering_ok = true;
};

/// Evaluates the family at theta0 and fills every available bound.
BoundReport compute_bounds(const StateFamily& family, const ParamPoint& theta0,
                           const WeightMatrix& g);

/// Re-checks C >= C_A >= C_R - tol over whichever values are present.
bool ordering_holds(const BoundValue& c, const BoundValue& c_a, const BoundValue& c_r);

// ---------------------------------------------------------------------------
// Covariance frontiers

enum class FrontierKind { RFixedSingle, RFixedAsymptotic, FullAsymptotic, FullSingleW };

const char* to_string(FrontierKind kind);

struct FrontierPoint {
  FrontierKind kind;
  double y = 0.0, z = 0.0, x = 0.0;  // explicit kinds
  std::optional<RealMatrix> w;       // FullSingleW
  RealMatrix v;
};

/// Explicit frontier points parameterized by (y, z); `radius` is r0 or r.
FrontierPoint frontier_point(FrontierKind kind, double radius, double y, double z);

/// J^{-1/2} W^{-1} J^{-1/2} with W symmetric PD, tr W = 1.
FrontierPoint frontier_point(const FisherMatrix& sld, const RealMatrix& w);

struct FrontierMin {
  double value;
  FrontierPoint argmin;
  int iterations;
};

/// Minimizes tr(G V) over an explicit frontier by damped Newton in (y, z).
/// RFixed kinds take a 2x2 G; FullAsymptotic a 3x3 G.
FrontierMin frontier_min(FrontierKind kind, double radius, const WeightMatrix& g);

/// Minimum of tr(G V) over the W-parameterized frontier.
FrontierMin frontier_min(const FisherMatrix& sld, const WeightMatrix& g);

}  // namespace qcrb
