#include "trafficflow/linearized.hpp"

namespace trafficflow {

std::vector<bool> to_mask(std::size_t n, const NodeSet& set) {
  std::vector<bool> mask(n, false);
  for (std::size_t i : set) {
    if (i >= n) throw std::out_of_range("node index out of range");
    mask[i] = true;
  }
  return mask;
}

NodeSet from_mask(const std::vector<bool>& mask) {
  NodeSet out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(i);
  }
  return out;
}

LinearizedSystem build_linearized(const Network& net, const std::vector<bool>& in_s,
                                  const std::vector<bool>& in_b) {
  const std::size_t n = net.n;
  LinearizedSystem sys{DenseMatrix(n, n), net.alpha};
  for (std::size_t i = 0; i < n; ++i) {
    auto m_row = sys.m.row(i);
    const auto p_row = net.p.row(i);
    const auto q_row = net.q.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (in_s[i]) {
        m_row[j] += p_row[j];
      } else if (p_row[j] != 0.0) {
        sys.rhs[j] += net.mu[i] * p_row[j];
      }
      if (in_b[i] && q_row[j] != 0.0) {
        m_row[j] += q_row[j];
        sys.rhs[j] -= net.mu[i] * q_row[j];
      }
    }
  }
  return sys;
}

std::optional<Vector> solve_linearized(const Network& net, const std::vector<bool>& in_s,
                                       const std::vector<bool>& in_b) {
  const LinearizedSystem sys = build_linearized(net, in_s, in_b);
  const std::size_t n = net.n;

  NodeSet active;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = sys.m.row(i);
    for (double v : row) {
      if (v != 0.0) {
        active.push_back(i);
        break;
      }
    }
  }

  Vector lambda = sys.rhs;
  if (active.empty()) return lambda;

  const std::size_t k = active.size();
  DenseMatrix block(k, k);
  Vector block_rhs(k);
  for (std::size_t a = 0; a < k; ++a) {
    block_rhs[a] = sys.rhs[active[a]];
    for (std::size_t b = 0; b < k; ++b) {
      block(a, b) = (a == b ? 1.0 : 0.0) - sys.m(active[a], active[b]);
    }
  }
  const LinearSolveResult solved = solve_left(block, block_rhs);
  if (!solved.unique()) return std::nullopt;

  std::vector<bool> in_active = to_mask(n, active);
  for (std::size_t a = 0; a < k; ++a) lambda[active[a]] = solved.x[a];
  for (std::size_t j = 0; j < n; ++j) {
    if (in_active[j]) continue;
    for (std::size_t a = 0; a < k; ++a) {
      const double w = sys.m(active[a], j);
      if (w != 0.0) lambda[j] += solved.x[a] * w;
    }
  }
  return lambda;
}

}  // namespace trafficflow
