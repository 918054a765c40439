#include "trafficflow/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trafficflow/linearized.hpp"

namespace trafficflow {

std::string to_string(SolveError::Kind kind) {
  switch (kind) {
    case SolveError::Kind::NotNI: return "NotNI";
    case SolveError::Kind::SingularInnerSystem: return "SingularInnerSystem";
    case SolveError::Kind::NonConvergence: return "NonConvergence";
    case SolveError::Kind::SpectralRadiusAtLeastOne: return "SpectralRadiusAtLeastOne";
    case SolveError::Kind::ConditionNotCertified: return "ConditionNotCertified";
    case SolveError::Kind::IterationCap: return "IterationCap";
  }
  return "unknown";
}

namespace {

std::string format_set(const NodeSet& set) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < set.size(); ++k) os << (k ? "," : "") << set[k] + 1;
  os << "}";
  return os.str();
}

void require_ni(const Network& net) {
  const ClassDecomposition dec = decompose(net);
  std::vector<NodeSet> isolated = dec.isolated_classes();
  if (isolated.empty()) return;
  std::string msg = "network is not NI; isolated class";
  msg += isolated.size() > 1 ? "es " : " ";
  for (std::size_t k = 0; k < isolated.size(); ++k) msg += (k ? ", " : "") + format_set(isolated[k]);
  throw SolveError(SolveError::Kind::NotNI, msg, std::move(isolated));
}

bool nonnegative(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x >= -kResidualTolerance; });
}

// One inner pass: Goodman-Massey style iteration on S with overflow set B.
Vector inner_pass(const Network& net, const std::vector<bool>& in_b, std::size_t outer,
                  SolveTrace& trace, std::size_t cap) {
  const std::size_t n = net.n;
  const NodeSet b_set = from_mask(in_b);
  std::vector<bool> in_s(n, false);
  for (std::size_t ell = 1;; ++ell) {
    if (trace.inner_iterations_total >= cap) {
      throw SolveError(SolveError::Kind::NonConvergence,
                       "iteration cap of " + std::to_string(cap) + " linear solves reached");
    }
    std::optional<Vector> lambda = solve_linearized(net, in_s, in_b);
    ++trace.inner_iterations_total;
    if (!lambda) {
      throw SolveError(SolveError::Kind::SingularInnerSystem,
                       "singular linear system with S=" + format_set(from_mask(in_s)) +
                           " and B=" + format_set(b_set));
    }
    std::vector<bool> next(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = !in_b[i] && (*lambda)[i] < net.mu[i] - kBoundaryTolerance;
    }
    trace.history.push_back({outer, ell, *lambda, from_mask(next), b_set});
    if (next == in_s) return std::move(*lambda);
    in_s = std::move(next);
  }
}

void require_valid_result(const Network& net, const Vector& lambda, EquationKind kind) {
  const double r = residual(net, lambda, kind);
  if (!(r < kResidualTolerance) || !nonnegative(lambda)) {
    std::ostringstream os;
    os.precision(3);
    os << "iteration stopped at a point with residual " << r;
    if (!nonnegative(lambda)) os << " and negative rates";
    throw SolveError(SolveError::Kind::NonConvergence, os.str());
  }
}

}  // namespace

TrafficSolution solve_jackson(const Network& net) {
  require_valid(net);
  const SpectralRadius r = spectral_radius(net.p);
  if (r.certified_one || r.value >= 1.0 - 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "spectral radius of P is " << r.value << ", not below 1";
    throw SolveError(SolveError::Kind::SpectralRadiusAtLeastOne, os.str());
  }
  const LinearSolveResult solved = solve_left(DenseMatrix::identity(net.n) - net.p, net.alpha);
  if (!solved.unique()) {
    throw SolveError(SolveError::Kind::SingularInnerSystem, "I - P is numerically singular");
  }
  TrafficSolution sol = make_solution(net, solved.x, EquationKind::Jackson);
  require_valid_result(net, sol.lambda, EquationKind::Jackson);
  return sol;
}

std::pair<TrafficSolution, SolveTrace> solve_goodman_massey(const Network& net) {
  require_valid(net);
  require_ni(net);
  SolveTrace trace;
  const std::vector<bool> no_overflow(net.n, false);
  Vector lambda = inner_pass(net, no_overflow, 1, trace, net.n + 1);
  trace.outer_iterations = trace.inner_iterations_total;
  trace.unstable_sets.push_back(unstable_nodes(net, lambda));
  TrafficSolution sol = make_solution(net, std::move(lambda), EquationKind::GoodmanMassey);
  require_valid_result(net, sol.lambda, EquationKind::GoodmanMassey);
  return {std::move(sol), std::move(trace)};
}

std::pair<TrafficSolution, SolveTrace> solve_overflow(const Network& net,
                                                      const OverflowOptions& options) {
  require_valid(net);
  require_ni(net);
  const std::size_t n = net.n;

  if (!options.best_effort) {
    const auto [gm, gm_trace] = solve_goodman_massey(net);
    const Condition2Verdict verdict = check_condition2(net, gm.unstable_set, options.condition2);
    if (!verdict.holds()) {
      std::vector<NodeSet> witness;
      if (!verdict.witness.empty() || verdict.kind == Condition2Verdict::Kind::FailsWitness) {
        witness.push_back(verdict.witness);
      }
      throw SolveError(SolveError::Kind::ConditionNotCertified,
                       "Condition 2 " + to_string(verdict.kind) + ": " + verdict.reason,
                       std::move(witness));
    }
  }

  SolveTrace trace;
  const std::size_t cap = n * n + 1;
  std::vector<bool> in_u(n, false);
  Vector lambda;
  for (std::size_t outer = 1;; ++outer) {
    lambda = inner_pass(net, in_u, outer, trace, cap);
    trace.outer_iterations = outer;
    std::vector<bool> next(n, false);
    for (std::size_t i = 0; i < n; ++i) next[i] = !(lambda[i] < net.mu[i] - kBoundaryTolerance);
    trace.unstable_sets.push_back(from_mask(next));
    if (next == in_u) break;
    in_u = std::move(next);
  }

  TrafficSolution sol = make_solution(net, std::move(lambda), EquationKind::Overflow);
  require_valid_result(net, sol.lambda, EquationKind::Overflow);
  return {std::move(sol), std::move(trace)};
}

TrafficSolution tarski_iterate(const Network& net, std::size_t max_steps) {
  require_valid(net);
  if (!net.q.is_zero()) throw std::invalid_argument("tarski_iterate requires Q = 0");
  const std::size_t n = net.n;
  Vector x(n, 0.0);
  Vector served(n);
  for (std::size_t step = 0; step < max_steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) served[i] = std::min(x[i], net.mu[i]);
    Vector next = left_multiply(served, net.p);
    for (std::size_t j = 0; j < n; ++j) next[j] += net.alpha[j];
    const double change = max_abs_diff(next, x);
    x = std::move(next);
    if (change < 1e-12) return make_solution(net, std::move(x), EquationKind::GoodmanMassey);
  }
  throw SolveError(SolveError::Kind::IterationCap,
                   "monotone iteration did not settle in " + std::to_string(max_steps) + " steps");
}

}  // namespace trafficflow
