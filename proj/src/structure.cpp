#include "trafficflow/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trafficflow/graph.hpp"

namespace trafficflow {

namespace {

constexpr double kRadiusMargin = 1e-9;

}  // namespace

std::vector<NodeSet> ClassDecomposition::isolated_classes() const {
  std::vector<NodeSet> out;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (k < isolated.size() && isolated[k]) out.push_back(classes[k]);
  }
  return out;
}

ClassDecomposition communicating_classes(const DenseMatrix& p) {
  if (!p.is_square()) throw std::invalid_argument("routing matrix is not square");
  ClassDecomposition dec;
  dec.classes = strongly_connected_components(incidence_graph(p));
  dec.class_of.assign(p.rows(), 0);
  for (std::size_t k = 0; k < dec.classes.size(); ++k) {
    for (std::size_t i : dec.classes[k]) dec.class_of[i] = k;
  }
  return dec;
}

ClassDecomposition characterize_classes(const Network& net, ClassDecomposition dec) {
  const ClassDecomposition fresh = communicating_classes(net.p);
  if (dec.classes != fresh.classes || dec.class_of != fresh.class_of) {
    throw std::invalid_argument("class decomposition does not match the routing matrix");
  }

  const std::size_t m = dec.classes.size();
  const auto graph = incidence_graph(net.p);

  NodeSet sources;
  for (std::size_t i = 0; i < net.n; ++i) {
    if (net.alpha[i] > 0.0) sources.push_back(i);
  }
  const std::vector<bool> filled = reachable_from(graph, sources);

  dec.fillable.assign(m, false);
  dec.ext_drainable.assign(m, false);
  dec.int_drainable.assign(m, false);
  dec.isolated.assign(m, false);

  // One-step access between classes.
  std::vector<std::vector<std::size_t>> class_graph(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i : dec.classes[k]) {
      if (filled[i]) dec.fillable[k] = true;
      if (net.p.row_sum(i) < 1.0 - kFullRowTolerance) dec.ext_drainable[k] = true;
      for (std::size_t j : graph[i]) {
        const std::size_t target = dec.class_of[j];
        if (target != k) {
          dec.int_drainable[k] = true;
          class_graph[k].push_back(target);
        }
      }
    }
    std::sort(class_graph[k].begin(), class_graph[k].end());
    class_graph[k].erase(std::unique(class_graph[k].begin(), class_graph[k].end()),
                         class_graph[k].end());
    dec.isolated[k] = !dec.fillable[k] && !dec.ext_drainable[k] && !dec.int_drainable[k];
  }

  dec.levels.assign(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    const std::vector<bool> reach = reachable_from(class_graph, NodeSet{k});
    for (std::size_t t = 0; t < m; ++t) {
      if (t != k && reach[t]) ++dec.levels[t];
    }
  }
  return dec;
}

ClassDecomposition decompose(const Network& net) {
  return characterize_classes(net, communicating_classes(net.p));
}

bool check_ni(const Network& net) {
  const ClassDecomposition dec = decompose(net);
  return std::none_of(dec.isolated.begin(), dec.isolated.end(), [](bool b) { return b; });
}

bool check_fd(const Network& net) {
  const ClassDecomposition dec = decompose(net);
  for (std::size_t k = 0; k < dec.size(); ++k) {
    if (!dec.fillable[k] && !dec.ext_drainable[k]) return false;
  }
  return true;
}

std::string to_string(Condition2Verdict::Kind kind) {
  switch (kind) {
    case Condition2Verdict::Kind::Holds: return "holds";
    case Condition2Verdict::Kind::HoldsBySufficientCheck: return "holds (sufficient check)";
    case Condition2Verdict::Kind::FailsWitness: return "fails";
    case Condition2Verdict::Kind::Marginal: return "marginal";
    case Condition2Verdict::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

DenseMatrix selection_matrix(const Network& net, const NodeSet& a) {
  DenseMatrix m(net.n, net.n);
  std::vector<bool> in_a(net.n, false);
  for (std::size_t i : a) {
    if (i >= net.n) throw std::out_of_range("node index out of range");
    in_a[i] = true;
  }
  for (std::size_t i = 0; i < net.n; ++i) {
    const auto src = in_a[i] ? net.p.row(i) : net.q.row(i);
    std::copy(src.begin(), src.end(), m.row(i).begin());
  }
  return m;
}

namespace {

std::vector<bool> membership(const Network& net, const NodeSet& set) {
  std::vector<bool> in(net.n, false);
  for (std::size_t i : set) {
    if (i >= net.n) throw std::out_of_range("U* contains node " + std::to_string(i) + " outside N");
    in[i] = true;
  }
  return in;
}

NodeSet free_nodes(const std::vector<bool>& in_u) {
  NodeSet free;
  for (std::size_t i = 0; i < in_u.size(); ++i) {
    if (!in_u[i]) free.push_back(i);
  }
  return free;
}

Condition2Verdict enumerate_subsets(const Network& net, const NodeSet& free) {
  const std::size_t count = std::size_t{1} << free.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    NodeSet a;
    for (std::size_t b = 0; b < free.size(); ++b) {
      if (mask & (std::size_t{1} << b)) a.push_back(free[b]);
    }
    const SpectralRadius r = spectral_radius(selection_matrix(net, a));
    if (r.value < 1.0 - kRadiusMargin) continue;

    Condition2Verdict v;
    v.witness = std::move(a);
    v.radius = r.value;
    if (r.certified_one || r.value > 1.0 + kRadiusMargin) {
      v.kind = Condition2Verdict::Kind::FailsWitness;
      v.reason = "subset enumeration";
    } else {
      v.kind = Condition2Verdict::Kind::Marginal;
      v.reason = "spectral radius within 1e-9 of 1 without a combinatorial certificate";
    }
    return v;
  }
  Condition2Verdict v;
  v.kind = Condition2Verdict::Kind::Holds;
  v.reason = "all " + std::to_string(count) + " subsets enumerated";
  return v;
}

bool full_row(std::span<const double> row) {
  double s = 0.0;
  for (double v : row) s += v;
  return s >= 1.0 - kFullRowTolerance;
}

bool support_inside(std::span<const double> row, const std::vector<bool>& in_core) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] > 0.0 && !in_core[j]) return false;
  }
  return true;
}

}  // namespace

NodeSet closed_stochastic_core(const Network& net, const NodeSet& u_star) {
  const std::vector<bool> in_u = membership(net, u_star);
  std::vector<bool> in_core(net.n, true);

  // Greatest fixed point: drop nodes with no full admissible row inside the core.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < net.n; ++i) {
      if (!in_core[i]) continue;
      const bool via_q = full_row(net.q.row(i)) && support_inside(net.q.row(i), in_core);
      const bool via_p =
          !in_u[i] && full_row(net.p.row(i)) && support_inside(net.p.row(i), in_core);
      if (!via_q && !via_p) {
        in_core[i] = false;
        changed = true;
      }
    }
  }
  NodeSet core;
  for (std::size_t i = 0; i < net.n; ++i) {
    if (in_core[i]) core.push_back(i);
  }
  return core;
}

Condition2Verdict check_condition2_enumerate(const Network& net, const NodeSet& u_star) {
  return enumerate_subsets(net, free_nodes(membership(net, u_star)));
}

Condition2Verdict check_condition2(const Network& net, const NodeSet& u_star,
                                   const Condition2Options& options) {
  const std::vector<bool> in_u = membership(net, u_star);
  const NodeSet free = free_nodes(in_u);

  // Every P_A + Q_{N\A} has its rows drawn from these, so a uniform row-sum
  // bound below one bounds every radius.
  double worst_row = 0.0;
  for (std::size_t i = 0; i < net.n; ++i) {
    double s = net.q.row_sum(i);
    if (!in_u[i]) s = std::max(s, net.p.row_sum(i));
    worst_row = std::max(worst_row, s);
  }
  if (worst_row < 1.0 - kRadiusMargin) {
    Condition2Verdict v;
    v.kind = Condition2Verdict::Kind::HoldsBySufficientCheck;
    v.radius = worst_row;
    v.reason = "every admissible row sum is below 1";
    return v;
  }

  DenseMatrix dominant = net.q;
  for (std::size_t i : free) {
    for (std::size_t j = 0; j < net.n; ++j) dominant(i, j) = std::max(net.p(i, j), net.q(i, j));
  }
  const SpectralRadius dom = spectral_radius(dominant);
  if (!dom.certified_one && dom.value < 1.0 - kRadiusMargin) {
    Condition2Verdict v;
    v.kind = Condition2Verdict::Kind::HoldsBySufficientCheck;
    v.radius = dom.value;
    v.reason = "entrywise-max matrix has spectral radius below 1";
    return v;
  }

  if (!options.use_closure_check) {
    if (free.size() <= options.enumeration_limit) return enumerate_subsets(net, free);
    Condition2Verdict v;
    v.kind = Condition2Verdict::Kind::Unknown;
    v.reason = "subset space too large; sufficient check failed";
    return v;
  }

  const NodeSet core = closed_stochastic_core(net, u_star);
  Condition2Verdict v;
  if (core.empty()) {
    v.kind = Condition2Verdict::Kind::Holds;
    v.reason = "no admissible row selection has a closed stochastic class";
    return v;
  }
  std::vector<bool> in_core(net.n, false);
  for (std::size_t i : core) in_core[i] = true;
  for (std::size_t i : core) {
    const bool q_ok = full_row(net.q.row(i)) && support_inside(net.q.row(i), in_core);
    if (!q_ok) v.witness.push_back(i);
  }
  const SpectralRadius r = spectral_radius(selection_matrix(net, v.witness));
  v.kind = Condition2Verdict::Kind::FailsWitness;
  v.radius = r.value;
  v.reason = "closed stochastic class under the witness row selection";
  return v;
}

}  // namespace trafficflow
