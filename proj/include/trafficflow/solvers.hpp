#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trafficflow/network.hpp"
#include "trafficflow/structure.hpp"

namespace trafficflow {

/// Residual threshold for a solution to count as valid.
inline constexpr double kResidualTolerance = 1e-9;

class SolveError : public std::runtime_error {
 public:
  enum class Kind {
    NotNI,
    SingularInnerSystem,
    NonConvergence,
    SpectralRadiusAtLeastOne,
    ConditionNotCertified,
    IterationCap,
  };

  SolveError(Kind kind, const std::string& message, std::vector<NodeSet> witness = {})
      : std::runtime_error(message), kind_(kind), witness_(std::move(witness)) {}

  Kind kind() const { return kind_; }
  /// Isolated classes for NotNI, the Condition 2 witness set for ConditionNotCertified.
  const std::vector<NodeSet>& witness() const { return witness_; }

 private:
  Kind kind_;
  std::vector<NodeSet> witness_;
};

std::string to_string(SolveError::Kind kind);

struct TraceStep {
  std::size_t outer = 0;  ///< kappa, starting at 1
  std::size_t inner = 0;  ///< ell within the outer pass, starting at 1
  Vector lambda;
  NodeSet stable_set;    ///< S^(ell) computed from lambda
  NodeSet overflow_set;  ///< B = U^(kappa-1) used for the solve

  bool operator==(const TraceStep&) const = default;
};

struct SolveTrace {
  std::size_t outer_iterations = 0;
  std::size_t inner_iterations_total = 0;
  std::vector<TraceStep> history;
  /// U^(kappa) after each outer pass.
  std::vector<NodeSet> unstable_sets;
};

/// lambda (I - P) = alpha. Throws SolveError(SpectralRadiusAtLeastOne) when
/// sigma(P) >= 1 - 1e-9.
TrafficSolution solve_jackson(const Network& net);

/// Goodman-Massey iteration on the stable set. Q is ignored. Every linear
/// solve is one iteration; the last one confirms that S stopped changing.
/// Throws SolveError(NotNI) with the isolated classes before iterating.
std::pair<TrafficSolution, SolveTrace> solve_goodman_massey(const Network& net);

struct OverflowOptions {
  /// Skip the Condition 2 gate and cap the total number of inner iterations
  /// at n^2 + 1 instead.
  bool best_effort = false;
  Condition2Options condition2;
};

/// Nested stable-set / overflow-set iteration for the overflow equation.
/// Without best_effort, Condition 2 must be certified first.
std::pair<TrafficSolution, SolveTrace> solve_overflow(const Network& net,
                                                      const OverflowOptions& options = {});

/// Least fixed point of x -> alpha + min(x, mu) P by monotone iteration from
/// zero. Requires Q = 0.
TrafficSolution tarski_iterate(const Network& net, std::size_t max_steps = 1000000);

}  // namespace trafficflow
