#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "trafficflow/generators.hpp"
#include "trafficflow/linalg.hpp"
#include "trafficflow/structure.hpp"

using namespace trafficflow;

namespace {

DenseMatrix random_nonnegative(SplitMix64& rng, std::size_t n, double density, double scale) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng.uniform() < density) m(i, j) = scale * rng.uniform();
  return m;
}

double eigen_radius(const DenseMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return e.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("mask_rows keeps exactly the listed rows") {
  const Network net = gen_example3();
  CHECK(mask_rows(net.p, {0, 1, 2, 3}) == net.p);
  CHECK(mask_rows(net.p, {}).is_zero());
  const DenseMatrix m = mask_rows(net.p, {2});
  CHECK(m(2, 1) == 0.5);
  CHECK(m(0, 1) == 0.0);
  CHECK_THROWS_AS(mask_rows(net.p, {4}), std::out_of_range);
}

TEST_CASE("row selection matrix of example 4") {
  const Network net = gen_example4(1.0);
  const DenseMatrix m = mask_rows(net.p, {2}) + mask_rows(net.q, {0, 1});
  CHECK(m == DenseMatrix::from_rows({{0, .5, .5}, {.5, 0, .5}, {.5, .5, 0}}));
}

TEST_CASE("submatrix selects in ascending order") {
  const Network net = gen_example3();
  CHECK(submatrix(net.p, {0, 1, 2, 3}, {0, 1, 2, 3}) == net.p);
  CHECK(submatrix(net.p, {2, 3}, {2, 3}) == DenseMatrix::from_rows({{0, 0.5}, {1, 0}}));
  const DenseMatrix two = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  CHECK(submatrix(two, {0}, {1}) == DenseMatrix::from_rows({{2}}));
  CHECK_THROWS(submatrix(two, {}, {1}));
  CHECK_THROWS_AS(submatrix(two, {0}, {2}), std::out_of_range);
}

TEST_CASE("identity system returns the right-hand side") {
  const Vector b = {1.5, -2.0, 0.25};
  const LinearSolveResult r = solve_left(DenseMatrix::identity(3), b);
  REQUIRE(r.unique());
  CHECK(r.x == b);
}

TEST_CASE("example 4 Jackson system") {
  const Network net = gen_example4(0.5);
  const LinearSolveResult r = solve_left(DenseMatrix::identity(3) - net.p, net.alpha);
  REQUIRE(r.unique());
  CHECK(r.x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(r.x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(r.x[2]) < 1e-15);
}

TEST_CASE("example 4 singular pattern is consistent only at alpha1 = 1") {
  const Network net = gen_example4(1.0);
  const DenseMatrix m = mask_rows(net.p, {2}) + mask_rows(net.q, {0, 1});
  const DenseMatrix a = DenseMatrix::identity(3) - m;
  // rhs = alpha + mu P_{1,2} - mu Q_{1,2}
  auto rhs_for = [&](double alpha1) {
    Vector rhs = {alpha1, 0.0, 0.0};
    for (std::size_t i : {0, 1}) {
      for (std::size_t j = 0; j < 3; ++j) rhs[j] += net.mu[i] * (net.p(i, j) - net.q(i, j));
    }
    return rhs;
  };
  const LinearSolveResult at_one = solve_left(a, rhs_for(1.0));
  CHECK(at_one.kind == LinearSolveResult::Kind::SingularConsistent);
  REQUIRE(at_one.null_basis.size() == 1);
  const Vector& v = at_one.null_basis[0];
  CHECK(v[0] == doctest::Approx(v[1]));
  CHECK(v[1] == doctest::Approx(v[2]));
  CHECK(solve_left(a, rhs_for(2.0)).kind == LinearSolveResult::Kind::SingularInconsistent);
}

TEST_CASE("solve_left rejects bad shapes") {
  CHECK_THROWS_AS(solve_left(DenseMatrix(2, 3), Vector(3)), std::invalid_argument);
  CHECK_THROWS_AS(solve_left(DenseMatrix::identity(2), Vector(3)), std::invalid_argument);
}

TEST_CASE("solve_left matches Eigen on random systems") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 12;
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform() * 2.0 - 1.0;
    Vector b(n);
    for (double& x : b) x = rng.uniform() * 10.0;
    const LinearSolveResult r = solve_left(a, b);
    REQUIRE(r.unique());
    CHECK(r.residual <= 1e-9 * (1.0 + max_norm(b)));

    const auto en = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd at(en, en);
    Eigen::VectorXd eb(en);
    for (Eigen::Index i = 0; i < en; ++i) {
      eb(i) = b[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < en; ++j) at(i, j) = a(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
    }
    const Eigen::VectorXd ex = at.fullPivLu().solve(eb);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.x[i] == doctest::Approx(ex(static_cast<Eigen::Index>(i))).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("Neumann systems give nonnegative solutions") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 10;
    const Network net = gen_random({n, static_cast<std::uint64_t>(trial + 1), 0.5, 0.5, 0.05});
    REQUIRE(spectral_radius(net.p).value < 1.0 - 1e-6);
    Vector b(n);
    for (double& x : b) x = rng.uniform();
    const LinearSolveResult r = solve_left(DenseMatrix::identity(n) - net.p, b);
    REQUIRE(r.unique());
    for (double x : r.x) CHECK(x >= 0.0);
    CHECK(r.residual <= 1e-9 * (1.0 + max_norm(b)));
  }
}

TEST_CASE("spectral radius of basic matrices") {
  CHECK(spectral_radius(DenseMatrix(4, 4)).value == 0.0);
  const SpectralRadius id = spectral_radius(DenseMatrix::identity(5));
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.certified_one);
  const SpectralRadius eq12 = spectral_radius(DenseMatrix::from_rows({{0, .5, .5}, {.5, 0, .5}, {.5, .5, 0}}));
  CHECK(std::abs(eq12.value - 1.0) <= 1e-9);
  CHECK(eq12.certified_one);
  const SpectralRadius c2 = spectral_radius(DenseMatrix::from_rows({{0, 0.5}, {1, 0}}));
  CHECK(std::abs(c2.value - std::sqrt(0.5)) <= 1e-9);
  CHECK_FALSE(c2.certified_one);
  CHECK_THROWS_AS(spectral_radius(DenseMatrix::from_rows({{0, -1}, {1, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(spectral_radius(DenseMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("spectral radius of nilpotent and periodic matrices") {
  DenseMatrix shift(6, 6);
  for (std::size_t i = 0; i + 1 < 6; ++i) shift(i, i + 1) = 1.0;
  CHECK(spectral_radius(shift).value < 1e-9);
  DenseMatrix cycle = shift;
  cycle(5, 0) = 0.3;
  CHECK(std::abs(spectral_radius(cycle).value - std::pow(0.3, 1.0 / 6.0)) <= 1e-9);
  const Network ex2 = gen_example2(8);
  const DenseMatrix pq = ex2.p + ex2.q;
  CHECK(std::abs(spectral_radius(pq).value - eigen_radius(pq)) <= 1e-9 * std::max(1.0, eigen_radius(pq)));
}

TEST_CASE("spectral radius agrees with Eigen on random nonnegative matrices") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 15;
    const double density = 0.15 + 0.8 * rng.uniform();
    const DenseMatrix m = random_nonnegative(rng, n, density, 0.1 + 2.0 * rng.uniform());
    const double expected = eigen_radius(m);
    const double got = spectral_radius(m).value;
    CHECK(std::abs(got - expected) <= 1e-9 * std::max(1.0, expected));
  }
}

TEST_CASE("spectral radius is monotone under masking and invariant under permutation") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const DenseMatrix m = random_nonnegative(rng, n, 0.5, 1.0);
    NodeSet keep;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform() < 0.5) keep.push_back(i);
    CHECK(spectral_radius(mask_rows(m, keep)).value <= spectral_radius(m).value + 1e-9);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = (i * 5 + 3) % n;
    if (std::gcd(n, std::size_t{5}) != 1) continue;
    DenseMatrix moved(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) moved(perm[i], perm[j]) = m(i, j);
    CHECK(std::abs(spectral_radius(moved).value - spectral_radius(m).value) <= 1e-9);
  }
}
