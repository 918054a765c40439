#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "trafficflow/linalg.hpp"

namespace trafficflow {

/// Tolerance on row sums of the routing and overflow matrices.
inline constexpr double kRowSumTolerance = 1e-12;

/// Slack used when classifying a node as stable (lambda < mu) or unstable.
/// Results within this distance of the boundary are classification-fragile.
inline constexpr double kBoundaryTolerance = 1e-9;

/// Fluid network (alpha, mu, P, Q) with n nodes. Node indices are 0-based.
///
/// A node with an all-zero row in q has an infinite buffer.
struct Network {
  std::size_t n = 0;
  Vector alpha;  ///< exogenous arrival rates, >= 0
  Vector mu;     ///< service capacities, > 0
  DenseMatrix p; ///< routing matrix, substochastic
  DenseMatrix q; ///< overflow matrix, substochastic

  bool operator==(const Network&) const = default;
};

enum class EquationKind { Jackson, GoodmanMassey, Overflow };

std::string_view to_string(EquationKind kind);

/// Rates that satisfy one of the traffic equations, with the induced node
/// classification.
struct TrafficSolution {
  Vector lambda;
  NodeSet stable_set;
  NodeSet unstable_set;
  double residual = 0.0;
  EquationKind equation_kind = EquationKind::Overflow;
};

struct ValidationIssue {
  std::string field;  ///< "n", "alpha", "mu", "p" or "q"
  std::size_t index;  ///< offending entry or row (0-based), 0 for whole-field problems
  std::string message;
};

struct ValidationResult {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string describe() const;
};

ValidationResult validate_network(const Network& net);

/// Thrown by parse_network and by constructors given an invalid network.
class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validates and throws NetworkError listing every issue.
void require_valid(const Network& net);

/// Max-norm residual |lambda - rhs(lambda)| of the chosen traffic equation:
///   Jackson:        rhs = alpha + lambda P
///   GoodmanMassey:  rhs = alpha + min(lambda, mu) P
///   Overflow:       rhs = alpha + min(lambda, mu) P + (lambda - mu)^+ Q
double residual(const Network& net, std::span<const double> lambda, EquationKind kind);

/// Nodes with lambda_i < mu_i - kBoundaryTolerance.
NodeSet stable_nodes(const Network& net, std::span<const double> lambda);
/// Complement of stable_nodes.
NodeSet unstable_nodes(const Network& net, std::span<const double> lambda);

TrafficSolution make_solution(const Network& net, Vector lambda, EquationKind kind);

/// JSON document with keys n, alpha, mu, p and optional q.
Network parse_network(std::string_view text);
std::string serialize_network(const Network& net);

Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path);

/// Relabels nodes: node i of the input becomes node perm[i] of the output.
Network permute_network(const Network& net, std::span<const std::size_t> perm);

/// Same network with Q set to zero.
Network without_overflow(const Network& net);

}  // namespace trafficflow
