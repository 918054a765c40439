#include "trafficflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "trafficflow/linearized.hpp"

namespace trafficflow {

namespace {

constexpr double kPatternSlack = 1e-9;
constexpr double kContinuumWidth = 1e-7;
constexpr double kOracleResidual = 1e-8;
constexpr std::size_t kMaxConstraints = 20000;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Halfspace {
  Vector a;  // a . t <= c
  double c;
};

struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool empty() const { return lo > hi; }
};

void normalize(Halfspace& h) {
  double scale = 0.0;
  for (double v : h.a) scale = std::max(scale, std::abs(v));
  if (scale > 0.0) {
    for (double& v : h.a) v /= scale;
    h.c /= scale;
  }
}

// Range of t_keep over { t : a.t <= c for all constraints } by eliminating
// every other coordinate.
Interval project(std::vector<Halfspace> cons, std::size_t keep) {
  const std::size_t d = cons.empty() ? 0 : cons.front().a.size();
  for (std::size_t j = 0; j < d; ++j) {
    if (j == keep) continue;
    std::vector<Halfspace> next;
    std::vector<const Halfspace*> pos;
    std::vector<const Halfspace*> neg;
    for (const Halfspace& h : cons) {
      if (h.a[j] > 0.0) {
        pos.push_back(&h);
      } else if (h.a[j] < 0.0) {
        neg.push_back(&h);
      } else {
        next.push_back(h);
      }
    }
    if (next.size() + pos.size() * neg.size() > kMaxConstraints) {
      throw std::runtime_error("Fourier-Motzkin elimination exceeded its size limit");
    }
    for (const Halfspace* p : pos) {
      for (const Halfspace* q : neg) {
        Halfspace h{Vector(d, 0.0), 0.0};
        const double wp = -q->a[j];
        const double wq = p->a[j];
        for (std::size_t k = 0; k < d; ++k) h.a[k] = wp * p->a[k] + wq * q->a[k];
        h.a[j] = 0.0;
        h.c = wp * p->c + wq * q->c;
        normalize(h);
        next.push_back(std::move(h));
      }
    }
    cons = std::move(next);
  }

  Interval out;
  for (const Halfspace& h : cons) {
    double coef = h.a.empty() ? 0.0 : h.a[keep];
    if (std::abs(coef) < 1e-14) coef = 0.0;
    if (coef > 0.0) {
      out.hi = std::min(out.hi, h.c / coef);
    } else if (coef < 0.0) {
      out.lo = std::max(out.lo, h.c / coef);
    } else if (h.c < -1e-12) {
      return Interval{1.0, 0.0};
    }
  }
  return out;
}

std::vector<Halfspace> pattern_constraints(const Network& net, const std::vector<bool>& in_s,
                                           const Vector& x0, const std::vector<Vector>& basis,
                                           double slack) {
  const std::size_t d = basis.size();
  std::vector<Halfspace> cons;
  for (std::size_t i = 0; i < net.n; ++i) {
    Vector row(d);
    for (std::size_t k = 0; k < d; ++k) row[k] = basis[k][i];
    if (in_s[i]) {
      cons.push_back({row, net.mu[i] + slack - x0[i]});
    } else {
      Vector neg(d);
      for (std::size_t k = 0; k < d; ++k) neg[k] = -row[k];
      cons.push_back({neg, x0[i] - (net.mu[i] - slack)});
    }
    Vector neg(d);
    for (std::size_t k = 0; k < d; ++k) neg[k] = -row[k];
    cons.push_back({std::move(neg), x0[i] + slack});
  }
  for (Halfspace& h : cons) normalize(h);
  return cons;
}

std::vector<Halfspace> fix_coordinate(const std::vector<Halfspace>& cons, std::size_t k, double value) {
  std::vector<Halfspace> out = cons;
  for (Halfspace& h : out) {
    h.c -= h.a[k] * value;
    h.a[k] = 0.0;
  }
  return out;
}

double pick(const Interval& iv) {
  if (std::isfinite(iv.lo)) return iv.lo;
  if (std::isfinite(iv.hi)) return iv.hi;
  return 0.0;
}

struct Region {
  Vector base_t;
  double widest = 0.0;
};

// Feasible point (lower ends first) of the pattern region in t-space, or
// nullopt when the region is empty.
std::optional<Region> locate(std::vector<Halfspace> cons, std::size_t d) {
  Region region;
  region.base_t.assign(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const Interval iv = project(cons, k);
    if (iv.empty()) return std::nullopt;
    region.widest = std::max(region.widest, iv.hi - iv.lo);
    region.base_t[k] = pick(iv);
    cons = fix_coordinate(cons, k, region.base_t[k]);
  }
  return region;
}

bool consistent_point(const Network& net, const std::vector<bool>& in_s, const Vector& x) {
  for (std::size_t i = 0; i < net.n; ++i) {
    if (x[i] < -kPatternSlack) return false;
    if (in_s[i] && !(x[i] < net.mu[i] + kPatternSlack)) return false;
    if (!in_s[i] && !(x[i] >= net.mu[i] - kPatternSlack)) return false;
  }
  return residual(net, x, EquationKind::Overflow) < kOracleResidual;
}

void normalize_direction(Vector& v) {
  double peak = 0.0;
  for (double x : v) {
    if (std::abs(x) > std::abs(peak)) peak = x;
  }
  if (peak != 0.0) {
    for (double& x : v) x /= peak;
  }
}

void add_solution(OracleVerdict& verdict, const Vector& x, const NodeSet& pattern) {
  for (const Vector& y : verdict.solutions) {
    if (max_abs_diff(x, y) <= kOracleDedupTolerance) return;
  }
  verdict.solutions.push_back(x);
  verdict.patterns.push_back(pattern);
}

void add_singular(const Network& net, const std::vector<bool>& in_s, const LinearSolveResult& solved,
                  OracleVerdict& verdict) {
  std::vector<Vector> basis = solved.null_basis;
  for (Vector& v : basis) normalize_direction(v);
  const std::size_t d = basis.size();

  std::optional<Region> region = locate(pattern_constraints(net, in_s, solved.x, basis, 0.0), d);
  if (!region) region = locate(pattern_constraints(net, in_s, solved.x, basis, kPatternSlack), d);
  if (!region) return;

  Vector base = solved.x;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < net.n; ++i) base[i] += region->base_t[k] * basis[k][i];
  }
  if (!consistent_point(net, in_s, base)) return;

  if (region->widest <= kContinuumWidth) {
    add_solution(verdict, base, from_mask(in_s));
    return;
  }

  OracleContinuum c;
  c.pattern = from_mask(in_s);
  c.base = std::move(base);
  c.directions = std::move(basis);
  if (d == 1) {
    const auto cons = pattern_constraints(net, in_s, c.base, c.directions, 0.0);
    Interval iv = project(cons, 0);
    if (iv.empty()) iv = project(pattern_constraints(net, in_s, c.base, c.directions, kPatternSlack), 0);
    c.t_min = std::max(0.0, iv.lo);
    c.t_max = iv.hi;
  } else {
    c.t_max = region->widest;
  }
  verdict.continua.push_back(std::move(c));
}

}  // namespace

OracleTooLarge::OracleTooLarge(std::size_t n)
    : std::runtime_error("subset oracle supports at most " + std::to_string(kOracleMaxNodes) +
                         " nodes, got " + std::to_string(n)),
      n_(n) {}

const char* to_string(OracleVerdict::Kind kind) {
  switch (kind) {
    case OracleVerdict::Kind::NoSolution: return "NoSolution";
    case OracleVerdict::Kind::Unique: return "Unique";
    case OracleVerdict::Kind::MultipleIsolated: return "MultipleIsolated";
    case OracleVerdict::Kind::Continuum: return "Continuum";
  }
  return "NoSolution";
}

OracleVerdict oracle_enumerate(const Network& net) {
  require_valid(net);
  const std::size_t n = net.n;
  if (n > kOracleMaxNodes) throw OracleTooLarge(n);

  OracleVerdict verdict;
  const std::size_t count = std::size_t{1} << n;
  const DenseMatrix eye = DenseMatrix::identity(n);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<bool> in_s(n, false);
    std::vector<bool> in_b(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      in_s[i] = (mask >> i) & 1U;
      in_b[i] = !in_s[i];
    }
    const LinearizedSystem sys = build_linearized(net, in_s, in_b);
    const LinearSolveResult solved = solve_left(eye - sys.m, sys.rhs);
    ++verdict.patterns_checked;
    switch (solved.kind) {
      case LinearSolveResult::Kind::Unique:
        if (consistent_point(net, in_s, solved.x)) add_solution(verdict, solved.x, from_mask(in_s));
        break;
      case LinearSolveResult::Kind::SingularConsistent:
        add_singular(net, in_s, solved, verdict);
        break;
      case LinearSolveResult::Kind::SingularInconsistent:
        break;
    }
  }

  if (!verdict.continua.empty()) {
    verdict.kind = OracleVerdict::Kind::Continuum;
  } else if (verdict.solutions.size() > 1) {
    verdict.kind = OracleVerdict::Kind::MultipleIsolated;
  } else if (verdict.solutions.size() == 1) {
    verdict.kind = OracleVerdict::Kind::Unique;
  }
  return verdict;
}

}  // namespace trafficflow
