#include <doctest.h>

#include "trace_checks.hpp"
#include "trafficflow/generators.hpp"
#include "trafficflow/oracle.hpp"
#include "trafficflow/solvers.hpp"
#include "trafficflow/structure.hpp"

using namespace trafficflow;
using trafficflow::testing::leq;
using trafficflow::testing::trace_violation;

namespace {

RandomSpec spec_for(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x5bd1e995ULL);
  RandomSpec spec;
  spec.n = 3 + static_cast<std::size_t>(rng.uniform() * 8.0);
  spec.seed = seed;
  spec.p_density = 0.2 + 0.7 * rng.uniform();
  spec.q_density = 0.2 + 0.7 * rng.uniform();
  spec.leak = 0.02 + 0.3 * rng.uniform();
  return spec;
}

}  // namespace

TEST_CASE("relabelling permutes the overflow solution") {
  for (std::uint64_t seed = 500; seed < 560; ++seed) {
    const Network net = gen_random(spec_for(seed));
    std::vector<std::size_t> perm(net.n);
    for (std::size_t i = 0; i < net.n; ++i) perm[i] = (i + seed) % net.n;
    const Vector a = solve_overflow(net).first.lambda;
    const Vector b = solve_overflow(permute_network(net, perm)).first.lambda;
    for (std::size_t i = 0; i < net.n; ++i) CHECK(b[perm[i]] == doctest::Approx(a[i]).epsilon(1e-9));
  }
}

TEST_CASE("overflow solution dominates the Goodman-Massey solution") {
  for (std::uint64_t seed = 600; seed < 700; ++seed) {
    const Network net = gen_random(spec_for(seed));
    const auto [gm, gm_trace] = solve_goodman_massey(net);
    const auto [of, of_trace] = solve_overflow(net);
    CHECK(leq(gm.lambda, of.lambda, 1e-9));
    CHECK(of_trace.outer_iterations <= net.n + 1);
    CHECK(of_trace.inner_iterations_total <= 1 + net.n * (net.n + 1) / 2);
    CHECK(gm_trace.inner_iterations_total <= net.n + 1);
    CHECK(trace_violation(of_trace, 1e-9) == "");
    CHECK(trace_violation(gm_trace, 1e-9) == "");
  }
}

TEST_CASE("Goodman-Massey is monotone in the input") {
  for (std::uint64_t seed = 700; seed < 740; ++seed) {
    const Network net = without_overflow(gen_random(spec_for(seed)));
    const Vector base = solve_goodman_massey(net).first.lambda;
    SplitMix64 rng(seed);
    Network more = net;
    for (double& a : more.alpha) a += rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    CHECK(leq(base, solve_goodman_massey(more).first.lambda, 1e-9));
  }
}

TEST_CASE("Goodman-Massey agrees with monotone iteration") {
  for (std::uint64_t seed = 800; seed < 860; ++seed) {
    const Network net = without_overflow(gen_random(spec_for(seed)));
    CHECK(max_abs_diff(solve_goodman_massey(net).first.lambda, tarski_iterate(net).lambda) < 1e-7);
  }
}

TEST_CASE("overflow solver agrees with the subset oracle") {
  for (std::uint64_t seed = 900; seed < 960; ++seed) {
    const Network net = gen_random(spec_for(seed));
    const OracleVerdict v = oracle_enumerate(net);
    REQUIRE(v.kind == OracleVerdict::Kind::Unique);
    CHECK(max_abs_diff(v.solutions[0], solve_overflow(net).first.lambda) < 1e-7);
  }
}

TEST_CASE("with Q = 0 the overflow trace repeats the Goodman-Massey trace") {
  for (std::uint64_t seed = 1000; seed < 1040; ++seed) {
    const Network net = without_overflow(gen_random(spec_for(seed)));
    const auto [gm, gm_trace] = solve_goodman_massey(net);
    const auto [of, of_trace] = solve_overflow(net);
    CHECK(gm.lambda == of.lambda);
    REQUIRE(of_trace.history.size() >= gm_trace.history.size());
    for (std::size_t k = 0; k < gm_trace.history.size(); ++k) CHECK(of_trace.history[k] == gm_trace.history[k]);
  }
}

TEST_CASE("residual contract on the worst-case family and the cell grid") {
  for (std::size_t n = 1; n <= 40; ++n) CHECK(solve_overflow(gen_example2(n)).first.residual < kResidualTolerance);
  for (double d : {0.0, 0.35, 1.0})
    for (double e : {0.0, 0.55, 1.0}) {
      const auto [s, trace] = solve_overflow(gen_example1({4, d, e}));
      CHECK(s.residual < kResidualTolerance);
      CHECK(trace_violation(trace, 1e-9) == "");
    }
}
