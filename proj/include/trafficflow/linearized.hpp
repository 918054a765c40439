#pragma once

#include <optional>
#include <vector>

#include "trafficflow/linalg.hpp"
#include "trafficflow/network.hpp"

namespace trafficflow {

/// Membership mask of a node set.
std::vector<bool> to_mask(std::size_t n, const NodeSet& set);
NodeSet from_mask(const std::vector<bool>& mask);

/// The partly linearized equation
///   lambda = alpha + mu P_{N\S} + lambda P_S + (lambda - mu) Q_B
/// written as lambda (I - m) = rhs with m = P_S + Q_B.
struct LinearizedSystem {
  DenseMatrix m;
  Vector rhs;
};

LinearizedSystem build_linearized(const Network& net, const std::vector<bool>& in_s,
                                  const std::vector<bool>& in_b);

/// Solves the linearized equation. Nodes whose row of m is zero never feed
/// back into the system, so only the block of nodes with a nonzero row is
/// eliminated and the others are read off directly. Returns nullopt when that
/// block is singular.
std::optional<Vector> solve_linearized(const Network& net, const std::vector<bool>& in_s,
                                       const std::vector<bool>& in_b);

}  // namespace trafficflow
