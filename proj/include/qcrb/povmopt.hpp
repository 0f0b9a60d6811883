#pragma once

#include "qcrb/bounds.hpp"
#include "qcrb/families.hpp"
#include "qcrb/infogeo.hpp"
#include "qcrb/povm.hpp"

#include <cstdint>
#include <vector>

namespace qcrb {

/// M_k = S^{-1/2} v_k v_k^dagger S^{-1/2} with S = sum_k v_k v_k^dagger.
/// Throws a singular-matrix error when S is not invertible.
Povm povm_from_generators(const std::vector<ComplexVector>& vectors);

/// m Gaussian-random rank-1 generators normalized to a POVM. Deterministic in
/// the seed. Degenerate draws are retried up to 10 times.
Povm random_povm(int dim, int m, std::uint64_t seed);

/// tr(G J_M^{-1}): the least tr(G V) over locally unbiased estimators that use
/// this measurement. Throws an infeasible-povm error when J_M is singular.
double inner_value(const Povm& povm, const FamilyAtPoint& fp, const WeightMatrix& g);

struct LocallyUnbiasedEstimator {
  Povm povm;
  std::vector<RealVector> values;  // one estimate per outcome
  ParamPoint theta0;

  /// sum_k p_k theta_k  (should equal theta0)
  RealVector mean(const FamilyAtPoint& fp) const;
  /// [sum_k theta_k^i tr(M_k d_j rho)]_ij  (should equal the identity)
  RealMatrix jacobian(const FamilyAtPoint& fp) const;
  /// Covariance about theta0 under rho.
  RealMatrix covariance(const FamilyAtPoint& fp) const;
};

/// theta_k = theta0 + J_M^{-1} s_k with s_k the score of outcome k.
LocallyUnbiasedEstimator recover_estimator(const Povm& povm, const FamilyAtPoint& fp,
                                           const ParamPoint& theta0);

struct SearchOptions {
  int outcomes = 0;  // 0 selects 2d + 2 (one copy) or 2 dim + 2 (several copies)
  int restarts = 16;
  int iters = 200;   // refinement sweeps per restart
  std::uint64_t seed = 1;
  int copies = 1;
  int threads = 0;   // 0 selects hardware concurrency
  double step0 = 0.3;
  double step_decay = 0.9;
};

struct SearchResult {
  double best_value;  // copies * tr(G V)
  Povm best_povm;
  LocallyUnbiasedEstimator estimator;
  int copies;
  int outcomes;
  int restarts_used;
  int feasible_restarts;
  int iterations;
  int best_restart;
  std::uint64_t seed;
  double step0;
  double step_decay;
  /// Best objective after each sweep of the winning restart.
  std::vector<double> trajectory;
};

/// Stochastic local search over n-copy POVMs for the smallest n tr(G V).
SearchResult optimize(const FamilyAtPoint& fp, const WeightMatrix& g, const ParamPoint& theta0,
                      const SearchOptions& opts);

/// Square grid of coherent-state projectors (1/pi)|b><b| dx dy centered on
/// `center`, half-width 6 sigma, plus the remainder I - sum.
Povm heterodyne_povm(int fock_dim, cplx center, double sigma, int grid_points);

}  // namespace qcrb
