#include "trafficflow/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trafficflow {

namespace {

enum Role : std::size_t { SW = 0, NW = 1, NE = 2, SE = 3 };
enum class Shift { Same, North, South, East };
enum class Weight { Fixed, Delta, Epsilon };

struct CellEdge {
  Role from;
  Role to;
  Shift shift;
  double weight;
  Weight scale;
};

constexpr CellEdge kRouting[] = {
    {SW, NW, Shift::Same, 0.4, Weight::Fixed},
    {SW, SE, Shift::Same, 0.4, Weight::Fixed},
    {SW, NW, Shift::South, 0.19, Weight::Delta},
    {NW, SW, Shift::Same, 0.1, Weight::Fixed},
    {NW, NE, Shift::Same, 0.1, Weight::Fixed},
    {NW, SW, Shift::North, 0.79, Weight::Delta},
    {NE, NW, Shift::Same, 0.4, Weight::Fixed},
    {NE, SE, Shift::Same, 0.4, Weight::Fixed},
    {NE, NW, Shift::East, 0.19, Weight::Delta},
    {SE, SW, Shift::Same, 0.5, Weight::Fixed},
    {SE, NE, Shift::Same, 0.5, Weight::Fixed},
};

constexpr CellEdge kOverflow[] = {
    {SW, NW, Shift::Same, 0.05, Weight::Fixed},
    {SW, SE, Shift::Same, 0.05, Weight::Fixed},
    {SW, NE, Shift::Same, 0.9, Weight::Fixed},
    {NW, SW, Shift::North, 1.0, Weight::Epsilon},
    {NE, SW, Shift::Same, 0.9, Weight::Fixed},
    {NE, SE, Shift::Same, 0.1, Weight::Fixed},
    {SE, SW, Shift::East, 1.0, Weight::Epsilon},
};

void place_edges(DenseMatrix& target, const CellEdge* begin, const CellEdge* end,
                 const CellGridSpec& spec) {
  const std::size_t m = spec.m;
  for (std::size_t cx = 0; cx < m; ++cx) {
    for (std::size_t cy = 0; cy < m; ++cy) {
      for (const CellEdge* e = begin; e != end; ++e) {
        std::size_t tx = cx;
        std::size_t ty = cy;
        if (e->shift == Shift::North) {
          if (cy + 1 >= m) continue;
          ty = cy + 1;
        } else if (e->shift == Shift::South) {
          if (cy == 0) continue;
          ty = cy - 1;
        } else if (e->shift == Shift::East) {
          if (cx + 1 >= m) continue;
          tx = cx + 1;
        }
        double w = e->weight;
        if (e->scale == Weight::Delta) w *= spec.delta;
        if (e->scale == Weight::Epsilon) w *= spec.epsilon;
        const std::size_t from = 4 * (cx * m + cy) + e->from;
        const std::size_t to = 4 * (tx * m + ty) + e->to;
        target(from, to) += w;
      }
    }
  }
}

}  // namespace

Network gen_example1(const CellGridSpec& spec) {
  if (spec.m < 2) throw std::invalid_argument("cell grid needs m >= 2");
  if (!(spec.delta >= 0.0 && spec.delta <= 1.0)) throw std::invalid_argument("delta must lie in [0,1]");
  if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0,1]");
  }
  Network net;
  net.n = 4 * spec.m * spec.m;
  net.alpha.assign(net.n, 0.0);
  net.alpha[0] = static_cast<double>(net.n) * static_cast<double>(net.n);
  net.mu.assign(net.n, 1.0);
  net.p = DenseMatrix(net.n, net.n);
  net.q = DenseMatrix(net.n, net.n);
  place_edges(net.p, std::begin(kRouting), std::end(kRouting), spec);
  place_edges(net.q, std::begin(kOverflow), std::end(kOverflow), spec);
  return net;
}

Network gen_example2(std::size_t n) {
  if (n < 1) throw std::invalid_argument("example 2 needs n >= 1");
  Network net;
  net.n = n;
  net.alpha.assign(n, 0.0);
  net.alpha[0] = 1.0;
  net.mu.resize(n);
  const double nn = static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i) {
    net.mu[i - 1] = i < n ? 1.0 + static_cast<double>(n - i) / (nn * (nn + 1.0)) : 1.0 / (2.0 * nn);
  }
  const double qn = 1.0 - std::ldexp(1.0, -static_cast<int>(n + 1));
  net.p = DenseMatrix(n, n);
  net.q = DenseMatrix(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    net.p(i, i + 1) = 1.0;
    net.q(i + 1, i) = qn;
  }
  return net;
}

Network gen_example3() {
  Network net;
  net.n = 4;
  net.alpha = {1.0, 0.0, 0.0, 0.0};
  net.mu = {1.0, 1.0, 1.0, 1.0};
  net.p = DenseMatrix::from_rows({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0.5, 0, 0.5}, {0, 0, 1, 0}});
  net.q = DenseMatrix(4, 4);
  return net;
}

Network gen_example4(double alpha1) {
  if (!(alpha1 > 0.0) || !std::isfinite(alpha1)) throw std::invalid_argument("alpha1 must be positive");
  Network net;
  net.n = 3;
  net.alpha = {alpha1, 0.0, 0.0};
  net.mu = {4.0 / 3.0, 2.0 / 3.0, 1.0};
  net.p = DenseMatrix::from_rows({{0, 0.5, 0}, {0.5, 0, 0}, {0.5, 0.5, 0}});
  net.q = DenseMatrix::from_rows({{0, 0.5, 0.5}, {0.5, 0, 0.5}, {0, 0, 0}});
  return net;
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

DenseMatrix random_rows(SplitMix64& rng, std::size_t n, double density, double leak) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (rng.uniform() < density) {
        m(i, j) = 0.05 + rng.uniform();
        total += m(i, j);
      }
    }
    if (total > 0.0) {
      const double scale = (1.0 - leak) / total;
      for (double& v : m.row(i)) v *= scale;
    }
  }
  return m;
}

}  // namespace

Network gen_random(const RandomSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("random network needs n >= 1");
  if (!(spec.p_density > 0.0 && spec.p_density <= 1.0) ||
      !(spec.q_density > 0.0 && spec.q_density <= 1.0) || !(spec.leak > 0.0 && spec.leak <= 1.0)) {
    throw std::invalid_argument("densities and leak must lie in (0,1]");
  }
  SplitMix64 rng(spec.seed);
  const std::size_t n = spec.n;
  Network net;
  net.n = n;
  net.p = random_rows(rng, n, spec.p_density, spec.leak);
  net.q = random_rows(rng, n, spec.q_density, spec.leak);
  net.alpha.assign(n, 0.0);
  const std::size_t source = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
  net.alpha[source] = static_cast<double>(n) * (0.5 + rng.uniform());
  net.mu.resize(n);
  for (double& mu : net.mu) mu = 0.5 + rng.uniform();
  return net;
}

}  // namespace trafficflow
