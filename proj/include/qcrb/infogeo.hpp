#pragma once

#include "qcrb/families.hpp"
#include "qcrb/matcore.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <utility>
#include <vector>

namespace qcrb {

struct Povm;

enum class FisherKind { SLD, RLD, Classical };

const char* to_string(FisherKind kind);

/// d x d information matrix. SLD and Classical kinds are real symmetric; the
/// RLD kind is complex Hermitian.
struct FisherMatrix {
  FisherKind kind;
  ComplexMatrix entries;

  Eigen::Index dim() const { return entries.rows(); }
  RealMatrix real() const { return entries.real(); }
  RealMatrix imag() const { return entries.imag(); }
};

inline constexpr double kProbFloor = 1e-12;
inline constexpr double kSupportTol = 1e-9;

/// Solves (L rho + rho L)/2 = drho on the support of rho; the block outside the
/// support is set to zero (minimal-norm solution).
HermitianOperator solve_sld(const HermitianOperator& rho, const HermitianOperator& drho);

/// drho * rho^{-1}. Requires a faithful state.
ComplexMatrix solve_rld(const HermitianOperator& rho, const HermitianOperator& drho);

/// drho * rho^+ where rho^+ inverts rho on eigenvalues above the singular
/// floor. Requires drho to vanish (within 1e-9) on the discarded eigenvectors,
/// so it agrees with solve_rld for faithful states and extends it to states
/// that are faithful only up to rounding, such as a truncated thermal state.
ComplexMatrix solve_rld_on_support(const HermitianOperator& rho, const HermitianOperator& drho);

std::vector<HermitianOperator> solve_slds(const FamilyAtPoint& fp);
std::vector<ComplexMatrix> solve_rlds(const FamilyAtPoint& fp);

/// J_ij = Re tr(rho L_i L_j).
FisherMatrix sld_fisher(const HermitianOperator& rho, const std::vector<HermitianOperator>& slds);

/// J~_ij = tr(L~_i^dagger L~_j rho).
FisherMatrix rld_fisher(const HermitianOperator& rho, const std::vector<ComplexMatrix>& rlds);

/// Fisher information of the outcome distribution p_k = tr(M_k rho).
FisherMatrix classical_fisher(const Povm& povm, const FamilyAtPoint& fp);

FisherMatrix sld_fisher(const FamilyAtPoint& fp);
/// Uses solve_rld on faithful states and solve_rld_on_support otherwise;
/// nullopt when the derivatives leave the support.
std::optional<FisherMatrix> rld_fisher(const FamilyAtPoint& fp);

/// Memoizes (J, J~) keyed by family and parameter point value. Concurrent
/// readers are allowed; inserts take an exclusive lock.
class FisherCache {
 public:
  struct Entry {
    FisherMatrix sld;
    std::optional<FisherMatrix> rld;
  };

  Entry get(const StateFamily& family, const ParamPoint& theta);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  using Key = std::pair<std::string, ParamPoint>;
  mutable std::shared_mutex mu_;
  std::map<Key, Entry> entries_;
  std::atomic<std::size_t> hits_{0};
};

}  // namespace qcrb
