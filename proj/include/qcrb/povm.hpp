#pragma once

#include "qcrb/matcore.hpp"

#include <vector>

namespace qcrb {

inline constexpr double kPovmPsdTol = 1e-10;
inline constexpr double kPovmSumTol = 1e-9;

/// Finite-outcome measurement: PSD elements summing to the identity.
struct Povm {
  std::vector<HermitianOperator> elements;

  Eigen::Index dim() const { return elements.empty() ? 0 : elements.front().dim(); }
  std::size_t size() const { return elements.size(); }

  /// Throws a parameter error when an element is not PSD or the sum is off.
  void validate() const;
};

}  // namespace qcrb
