#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "trafficflow/network.hpp"

namespace trafficflow {

/// Largest network the subset oracle accepts.
inline constexpr std::size_t kOracleMaxNodes = 24;
/// Two oracle solutions closer than this in max-norm are the same solution.
inline constexpr double kOracleDedupTolerance = 1e-7;

class OracleTooLarge : public std::runtime_error {
 public:
  explicit OracleTooLarge(std::size_t n);
  std::size_t n() const { return n_; }

 private:
  std::size_t n_;
};

/// Affine family of solutions found on one stable-set pattern.
struct OracleContinuum {
  NodeSet pattern;  ///< the stable set S
  Vector base;
  std::vector<Vector> directions;
  /// For a single direction, base + t * directions[0] solves the equation for
  /// every t in [t_min, t_max]; t_min is 0 by construction.
  double t_min = 0.0;
  double t_max = 0.0;
};

struct OracleVerdict {
  enum class Kind { NoSolution, Unique, MultipleIsolated, Continuum };

  Kind kind = Kind::NoSolution;
  /// Distinct isolated solutions in canonical pattern order.
  std::vector<Vector> solutions;
  /// Distinct stable sets of the isolated solutions, parallel to `solutions`.
  std::vector<NodeSet> patterns;
  std::vector<OracleContinuum> continua;
  std::size_t patterns_checked = 0;
};

const char* to_string(OracleVerdict::Kind kind);

/// For every S in N solves
///   lambda = alpha + mu P_{N\S} + lambda P_S + (lambda - mu) Q_{N\S}
/// and keeps the nonnegative solutions whose stable pattern is S (within a
/// 1e-9 slack at the boundary). Singular consistent patterns are intersected
/// with their pattern region and reported as continua.
/// Throws OracleTooLarge when n > kOracleMaxNodes.
OracleVerdict oracle_enumerate(const Network& net);

}  // namespace trafficflow
