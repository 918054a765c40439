#include "trafficflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "trafficflow/graph.hpp"

namespace trafficflow {

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double DenseMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (double v : row(i)) s += v;
  return s;
}

bool DenseMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
}

void require_index_set(const NodeSet& set, std::size_t bound) {
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (set[k] >= bound) {
      throw std::out_of_range("node index " + std::to_string(set[k]) + " out of range");
    }
    if (k > 0 && set[k] <= set[k - 1]) {
      throw std::invalid_argument("node set must be sorted and duplicate-free");
    }
  }
}

}  // namespace

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix dimension mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Vector left_multiply(std::span<const double> x, const DenseMatrix& m) {
  if (x.size() != m.rows()) throw std::invalid_argument("vector/matrix dimension mismatch");
  Vector out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (x[i] == 0.0) continue;
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += x[i] * r[j];
  }
  return out;
}

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double inf_norm(const DenseMatrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double v : m.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

DenseMatrix mask_rows(const DenseMatrix& m, const NodeSet& keep) {
  require_index_set(keep, m.rows());
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i : keep) std::copy(m.row(i).begin(), m.row(i).end(), out.row(i).begin());
  return out;
}

DenseMatrix submatrix(const DenseMatrix& m, const NodeSet& a, const NodeSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("submatrix of an empty index set");
  require_index_set(a, m.rows());
  require_index_set(b, m.cols());
  DenseMatrix out(a.size(), b.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < b.size(); ++c) out(r, c) = m(a[r], b[c]);
  return out;
}

namespace {

// Row-echelon factorization P T = L U of a square matrix T with partial
// pivoting. Columns whose best pivot is negligible relative to the pivot row's
// original scale are left free.
struct Echelon {
  DenseMatrix lu;
  std::vector<std::size_t> perm;   // perm[k] = original row now at position k
  std::vector<std::size_t> pivot_cols;
  std::vector<bool> is_pivot;
  double min_pivot = std::numeric_limits<double>::infinity();
  double max_pivot = 0.0;

  explicit Echelon(DenseMatrix t) : lu(std::move(t)), perm(lu.rows()), is_pivot(lu.rows(), false) {
    const std::size_t n = lu.rows();
    std::vector<double> scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      perm[i] = i;
      for (double v : lu.row(i)) scale[i] = std::max(scale[i], std::abs(v));
    }

    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < n; ++c) {
      std::size_t best = rank;
      for (std::size_t r = rank + 1; r < n; ++r) {
        if (std::abs(lu(r, c)) > std::abs(lu(best, c))) best = r;
      }
      const double pivot = lu(best, c);
      const double row_scale = scale[perm[best]];
      if (row_scale == 0.0 || std::abs(pivot) <= kPivotTolerance * row_scale) continue;

      if (best != rank) {
        std::swap_ranges(lu.row(best).begin(), lu.row(best).end(), lu.row(rank).begin());
        std::swap(perm[best], perm[rank]);
      }
      for (std::size_t r = rank + 1; r < n; ++r) {
        const double f = lu(r, c) / pivot;
        lu(r, c) = f;
        if (f == 0.0) continue;
        for (std::size_t j = c + 1; j < n; ++j) lu(r, j) -= f * lu(rank, j);
      }
      pivot_cols.push_back(c);
      is_pivot[c] = true;
      min_pivot = std::min(min_pivot, std::abs(pivot));
      max_pivot = std::max(max_pivot, std::abs(pivot));
      ++rank;
    }
  }

  std::size_t rank() const { return pivot_cols.size(); }
  bool full_rank() const { return rank() == lu.rows(); }

  // Solves T y = rhs with free variables fixed by `free_values` (indexed by
  // column, only free entries are read).
  Vector solve(std::span<const double> rhs, const Vector& free_values) const {
    const std::size_t n = lu.rows();
    Vector w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = rhs[perm[k]];
    for (std::size_t k = 0; k < rank(); ++k) {
      const std::size_t c = pivot_cols[k];
      for (std::size_t r = k + 1; r < n; ++r) w[r] -= lu(r, c) * w[k];
    }
    Vector y(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      if (!is_pivot[c]) y[c] = free_values[c];
    }
    for (std::size_t k = rank(); k-- > 0;) {
      const std::size_t c = pivot_cols[k];
      double s = w[k];
      for (std::size_t j = c + 1; j < n; ++j) s -= lu(k, j) * y[j];
      y[c] = s / lu(k, c);
    }
    return y;
  }
};

// ||x A - b||_inf accumulated in extended precision.
double left_residual(const DenseMatrix& a, std::span<const double> x, std::span<const double> b,
                     Vector* out = nullptr) {
  const std::size_t n = a.rows();
  double worst = 0.0;
  if (out) out->assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    long double s = -static_cast<long double>(b[j]);
    for (std::size_t i = 0; i < n; ++i) s += static_cast<long double>(x[i]) * a(i, j);
    if (out) (*out)[j] = static_cast<double>(-s);
    worst = std::max(worst, static_cast<double>(std::abs(s)));
  }
  return worst;
}

}  // namespace

LinearSolveResult solve_left(const DenseMatrix& a, std::span<const double> b) {
  if (!a.is_square()) throw std::invalid_argument("solve_left: matrix is not square");
  if (b.size() != a.rows()) throw std::invalid_argument("solve_left: right-hand side length mismatch");

  const std::size_t n = a.rows();
  LinearSolveResult result;
  if (n == 0) return result;

  const Echelon ech(transpose(a));
  const Vector zeros(n, 0.0);
  Vector x = ech.solve(b, zeros);

  if (ech.full_rank()) {
    Vector r;
    double res = left_residual(a, x, b, &r);
    // Two rounds of iterative refinement; keep the best iterate.
    for (int round = 0; round < 2 && res > 0.0; ++round) {
      const Vector d = ech.solve(r, zeros);
      Vector candidate(n);
      for (std::size_t i = 0; i < n; ++i) candidate[i] = x[i] + d[i];
      Vector r2;
      const double res2 = left_residual(a, candidate, b, &r2);
      if (!(res2 < res)) break;
      x = std::move(candidate);
      r = std::move(r2);
      res = res2;
    }
    result.kind = LinearSolveResult::Kind::Unique;
    result.x = std::move(x);
    result.residual = res;
    result.condition_estimate = ech.max_pivot / ech.min_pivot;
    return result;
  }

  // Singular: classify by the residual of the basic solution.
  result.residual = left_residual(a, x, b);
  result.condition_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < n; ++c) {
    if (ech.is_pivot[c]) continue;
    Vector free_values(n, 0.0);
    free_values[c] = 1.0;
    result.null_basis.push_back(ech.solve(zeros, free_values));
  }
  if (result.residual <= kConsistencyTolerance * (1.0 + max_norm(b))) {
    result.kind = LinearSolveResult::Kind::SingularConsistent;
    result.x = std::move(x);
  } else {
    result.kind = LinearSolveResult::Kind::SingularInconsistent;
  }
  return result;
}

namespace {

// True when some strongly connected block of m has every row summing to one
// inside the block.
bool has_stochastic_block(const DenseMatrix& m) {
  const auto components = strongly_connected_components(incidence_graph(m));
  for (const NodeSet& c : components) {
    bool stochastic = true;
    for (std::size_t i : c) {
      double s = 0.0;
      for (std::size_t j : c) s += m(i, j);
      if (s < 1.0 - kFullRowTolerance) {
        stochastic = false;
        break;
      }
    }
    if (stochastic) return true;
  }
  return false;
}

bool nilpotent(const DenseMatrix& m) {
  const auto graph = incidence_graph(m);
  for (const NodeSet& c : strongly_connected_components(graph)) {
    if (c.size() > 1 || m(c[0], c[0]) != 0.0) return false;
  }
  return true;
}

}  // namespace

SpectralRadius spectral_radius(const DenseMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("spectral_radius: matrix is not square");
  for (double v : m.data()) {
    if (!(v >= 0.0)) throw std::invalid_argument("spectral_radius: matrix has a negative or NaN entry");
  }

  SpectralRadius out;
  out.certified_one = has_stochastic_block(m);
  bool substochastic = true;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.row_sum(i) > 1.0 + 1e-12) substochastic = false;
  }
  if (out.certified_one && substochastic) {
    out.value = 1.0;
    return out;
  }

  double norm = inf_norm(m);
  if (norm == 0.0 || nilpotent(m)) return out;

  // B = (I + A / ||A||) / 2 has sigma(B) = (1 + sigma(A) / ||A||) / 2 and is
  // aperiodic. With ||B_k|| = 1 and B^(2^k) = exp(2^k l_k) B_k, squaring gives
  // l_{k+1} = l_k + log ||B_k^2|| / 2^(k+1), and l_k -> log sigma(B).
  DenseMatrix b = m;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (double& v : b.row(i)) v /= 2.0 * norm;
    b(i, i) += 0.5;
  }
  const double start = inf_norm(b);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (double& v : b.row(i)) v /= start;
  double log_radius = std::log(start);
  int min_squarings = 8;
  for (std::size_t span = 1; span < m.rows(); span *= 2) ++min_squarings;
  double weight = 0.5;
  for (int k = 0; k < 64; ++k, weight *= 0.5) {
    DenseMatrix sq = multiply(b, b);
    const double s = inf_norm(sq);
    const double increment = std::log(s) * weight;
    log_radius += increment;
    for (std::size_t i = 0; i < sq.rows(); ++i)
      for (double& v : sq.row(i)) v /= s;
    b = std::move(sq);
    if (k >= min_squarings && std::abs(increment) < 1e-17) break;
  }
  out.value = std::max(0.0, norm * (2.0 * std::exp(log_radius) - 1.0));
  return out;
}

}  // namespace trafficflow
