#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "trace_checks.hpp"
#include "trafficflow/cli/commands.hpp"
#include "trafficflow/cli/heatmap.hpp"
#include "trafficflow/generators.hpp"
#include "trafficflow/oracle.hpp"
#include "trafficflow/solvers.hpp"
#include "trafficflow/structure.hpp"

using namespace trafficflow;
using trafficflow::testing::leq;
using trafficflow::testing::trace_violation;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

RandomSpec corpus_spec(std::size_t k) {
  SplitMix64 rng(0xa5a5a5a5ULL + k);
  RandomSpec spec;
  spec.n = 3 + k % 8;
  spec.seed = 10000 + k;
  spec.p_density = 0.2 + 0.7 * rng.uniform();
  spec.q_density = 0.2 + 0.7 * rng.uniform();
  spec.leak = 0.02 + 0.3 * rng.uniform();
  return spec;
}

std::vector<Network> corpus(std::size_t count) {
  std::vector<Network> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(gen_random(corpus_spec(k)));
  return out;
}

void criterion1(Outcome& o) {
  const auto start = Clock::now();
  for (double a : {0.25, 0.5, 0.9}) {
    const OracleVerdict v = oracle_enumerate(gen_example4(a));
    const bool ok = v.kind == OracleVerdict::Kind::Unique &&
                    max_abs_diff(v.solutions[0], Vector{4 * a / 3, 2 * a / 3, 0.0}) < 1e-9;
    o.expect(ok, "alpha1=" + fmt(a) + " expected Unique, got " + to_string(v.kind));
  }
  {
    const OracleVerdict v = oracle_enumerate(gen_example4(1.0));
    bool base_ok = false;
    for (const OracleContinuum& c : v.continua) {
      if (max_abs_diff(c.base, Vector{4.0 / 3, 2.0 / 3, 0.0}) < 1e-9) base_ok = true;
    }
    o.expect(v.kind == OracleVerdict::Kind::Continuum && base_ok,
             "alpha1=1 expected Continuum with base [4/3, 2/3, 0], got " + std::string(to_string(v.kind)));
  }
  for (double a : {1.1, 2.0, 10.0}) {
    const Network net = gen_example4(a);
    const OracleVerdict v = oracle_enumerate(net);
    if (v.kind == OracleVerdict::Kind::NoSolution) continue;
    std::string detail = "alpha1=" + fmt(a) + " expected NoSolution, got " + to_string(v.kind);
    if (!v.solutions.empty()) {
      detail += " " + cli::format_vector(v.solutions[0]) + " with residual " +
                fmt(residual(net, v.solutions[0], EquationKind::Overflow));
    }
    o.failures.push_back(detail);
  }
  const double t = seconds_since(start);
  o.expect(t < 1.0, "runtime " + fmt(t) + " s exceeds 1 s");
}

void criterion2(Outcome& o) {
  const auto start = Clock::now();
  for (std::size_t n = 1; n <= 30; ++n) {
    const auto [s, trace] = solve_overflow(gen_example2(n));
    o.expect(trace.inner_iterations_total == 1 + n * (n + 1) / 2,
             "n=" + std::to_string(n) + " inner total " + std::to_string(trace.inner_iterations_total));
    o.expect(s.residual < 1e-9, "n=" + std::to_string(n) + " residual " + fmt(s.residual));
  }
  const double t = seconds_since(start);
  o.expect(t < 10.0, "runtime " + fmt(t) + " s exceeds 10 s");
}

void criterion3(Outcome& o) {
  const Network net = gen_example3();
  o.expect(!check_fd(net), "example 3 is reported FD");
  o.expect(check_ni(net), "example 3 is not reported NI");
  const auto [s, trace] = solve_goodman_massey(net);
  o.expect(s.residual < 1e-9, "residual " + fmt(s.residual));
  o.expect(s.unstable_set == NodeSet{0, 1}, "U* = " + cli::format_set(s.unstable_set));
  const TrafficSolution t = tarski_iterate(net);
  o.expect(max_abs_diff(s.lambda, t.lambda) < 1e-7, "lambda differs from the least fixed point");
  o.notes.push_back("lambda " + cli::format_vector(s.lambda));
}

void criterion4(Outcome& o) {
  DenseMatrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = i == j ? 0.0 : 0.5;
  const SpectralRadius r = spectral_radius(m);
  o.expect(std::abs(r.value - 1.0) < 1e-9, "spectral radius " + fmt(r.value));
  const Network net = gen_example4(1.0);
  const NodeSet u_star = solve_goodman_massey(net).first.unstable_set;
  const Condition2Verdict v = check_condition2(net, u_star);
  o.expect(v.kind == Condition2Verdict::Kind::FailsWitness && v.witness == NodeSet{2},
           "condition check " + to_string(v.kind) + " witness " + cli::format_set(v.witness));
}

void heatmap_checks(Outcome& o, const cli::HeatmapGrid& grid, const std::string& label) {
  const double n = 4.0 * static_cast<double>(grid.m * grid.m);
  std::size_t failed = 0;
  for (const cli::HeatmapCell& c : grid.cells) {
    if (!c.ok) ++failed;
    o.expect(c.fraction >= 0.0 && c.fraction <= 1.0, label + " fraction out of range");
  }
  o.expect(failed == 0, label + ": " + std::to_string(failed) + " cells failed to solve");
  const cli::MonotonicityReport rep = cli::check_monotonicity(grid, 1.0 / n);
  o.expect(rep.violations == 0, label + ": " + std::to_string(rep.violations) + " monotonicity violations");
  o.notes.push_back(label + " " + std::to_string(grid.cells.size()) + " cells, " +
                    std::to_string(rep.ties_or_slack) + " drops within slack");
}

void criterion5(Outcome& o) {
  auto start = Clock::now();
  const cli::HeatmapGrid coarse = cli::run_heatmap({3, 0.1, 1, false});
  const double t_coarse = seconds_since(start);
  o.expect(coarse.cells.size() == 121, "coarse grid has " + std::to_string(coarse.cells.size()) + " cells");
  o.expect(t_coarse < 60.0, "coarse sweep took " + fmt(t_coarse) + " s");
  heatmap_checks(o, coarse, "m=3 step 0.1 (" + fmt(t_coarse) + " s)");

  const std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  start = Clock::now();
  for (std::size_t m : {3, 5}) {
    const auto t0 = Clock::now();
    const cli::HeatmapGrid fine = cli::run_heatmap({m, 0.01, jobs, false});
    heatmap_checks(o, fine, "m=" + std::to_string(m) + " step 0.01 (" + fmt(seconds_since(t0)) + " s)");
  }
  const double t_fine = seconds_since(start);
  o.expect(t_fine < 3600.0, "fine sweeps took " + fmt(t_fine) + " s");
}

void criterion6(Outcome& o) {
  const auto start = Clock::now();
  for (const Network& net : corpus(200)) {
    const OracleVerdict v = oracle_enumerate(net);
    if (v.kind != OracleVerdict::Kind::Unique) {
      o.failures.push_back("oracle verdict " + std::string(to_string(v.kind)) + " at n=" + std::to_string(net.n));
      continue;
    }
    const double d = max_abs_diff(v.solutions[0], solve_overflow(net).first.lambda);
    o.expect(d < 1e-7, "overflow solution differs from the oracle by " + fmt(d));
    const Network plain = without_overflow(net);
    const double g = max_abs_diff(solve_goodman_massey(plain).first.lambda, tarski_iterate(plain).lambda);
    o.expect(g < 1e-7, "GM differs from monotone iteration by " + fmt(g));
  }
  const double t = seconds_since(start);
  o.expect(t < 60.0, "runtime " + fmt(t) + " s exceeds 60 s");
}

void criterion7(Outcome& o) {
  std::size_t k = 0;
  for (const Network& net : corpus(200)) {
    const std::size_t n = net.n;
    const auto [gm, gm_trace] = solve_goodman_massey(net);
    const auto [of, of_trace] = solve_overflow(net);
    const std::string at = " (network " + std::to_string(k) + ")";
    o.expect(leq(gm.lambda, of.lambda, 1e-9), "overflow solution below GM" + at);
    o.expect(gm_trace.outer_iterations - 1 <= n, "GM passes exceed n" + at);
    o.expect(of_trace.outer_iterations <= n + 1, "overflow outer iterations exceed n+1" + at);
    o.expect(of_trace.inner_iterations_total <= 1 + n * (n + 1) / 2, "overflow inner total too large" + at);
    const std::string gv = trace_violation(gm_trace, 1e-9);
    const std::string ov = trace_violation(of_trace, 1e-9);
    o.expect(gv.empty(), "GM trace: " + gv + at);
    o.expect(ov.empty(), "overflow trace: " + ov + at);

    SplitMix64 rng(0x77ULL + k);
    for (int trial = 0; trial < 50; ++trial) {
      Network more = net;
      for (double& a : more.alpha) a += rng.uniform() < 0.5 ? 0.0 : rng.uniform();
      o.expect(leq(gm.lambda, solve_goodman_massey(more).first.lambda, 1e-9), "GM not monotone in alpha" + at);
    }
    ++k;
  }
}

void criterion8(Outcome& o) {
  std::size_t checked = 0;
  for (std::size_t k = 0; checked < 100; ++k) {
    const Network net = without_overflow(gen_random(corpus_spec(k)));
    if (!check_ni(net)) continue;
    ++checked;
    const auto [gm, gm_trace] = solve_goodman_massey(net);
    const auto [of, of_trace] = solve_overflow(net);
    const std::string at = " (network " + std::to_string(k) + ")";
    o.expect(gm.lambda == of.lambda, "final lambda differs" + at);
    const auto& g = gm_trace.history;
    const auto& h = of_trace.history;
    bool same = h.size() >= g.size() && std::equal(g.begin(), g.end(), h.begin());
    for (std::size_t i = g.size(); same && i < h.size(); ++i) {
      const TraceStep& ref = g[(i - g.size()) % g.size()];
      same = h[i].lambda == ref.lambda && h[i].stable_set == ref.stable_set;
    }
    o.expect(same, "traces differ" + at);
  }
}

const std::vector<std::function<void(Outcome&)>> kCriteria = {criterion1, criterion2, criterion3, criterion4,
                                                             criterion5, criterion6, criterion7, criterion8};

bool run(int k) {
  Outcome o;
  const auto start = Clock::now();
  try {
    kCriteria[k - 1](o);
  } catch (const std::exception& e) {
    o.failures.push_back(std::string("exception: ") + e.what());
  }
  const double t = seconds_since(start);
  const bool pass = o.failures.empty();
  std::printf("criterion %d: %s (%.3f s)", k, pass ? "PASS" : "FAIL", t);
  if (!pass) {
    std::printf(" - %s", o.failures.front().c_str());
    if (o.failures.size() > 1) std::printf(" (+%zu more)", o.failures.size() - 1);
  }
  std::printf("\n");
  for (const std::string& f : o.failures) std::printf("  failure: %s\n", f.c_str());
  for (const std::string& note : o.notes) std::printf("  note: %s\n", note.c_str());
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (int k = 1; k <= 8; ++k) {
    if (criterion != 0 && k != criterion) continue;
    all_pass = run(k) && all_pass;
  }
  return all_pass ? 0 : 1;
}
