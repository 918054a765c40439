#include "trafficflow/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "trafficflow/conditions.hpp"
#include "trafficflow/oracle.hpp"
#include "trafficflow/solvers.hpp"

namespace trafficflow::cli {

namespace {

std::string fmt(double x, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

int exit_code_for(const SolveError& e) {
  switch (e.kind()) {
    case SolveError::Kind::NotNI: return kExitNotNI;
    case SolveError::Kind::ConditionNotCertified:
    case SolveError::Kind::SpectralRadiusAtLeastOne: return kExitConditionFailure;
    case SolveError::Kind::SingularInnerSystem:
    case SolveError::Kind::NonConvergence:
    case SolveError::Kind::IterationCap: return kExitNonConvergence;
  }
  return kExitNonConvergence;
}

void print_solution(const TrafficSolution& sol, std::ostream& out) {
  out << "equation: " << to_string(sol.equation_kind) << "\n";
  out << "lambda: " << format_vector(sol.lambda) << "\n";
  out << "stable: " << format_set(sol.stable_set) << "\n";
  out << "unstable: " << format_set(sol.unstable_set) << "\n";
  out << "residual: " << fmt(sol.residual, 3) << "\n";
}

}  // namespace

std::string format_vector(const Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s + "]";
}

std::string format_set(const NodeSet& set) {
  std::string s = "{";
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(set[k] + 1);
  }
  return s + "}";
}

int cmd_solve(const std::string& path, EquationKind kind, bool best_effort, std::ostream& out,
              std::ostream& err) {
  Network net;
  try {
    net = load_network(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  try {
    switch (kind) {
      case EquationKind::Jackson:
        print_solution(solve_jackson(net), out);
        break;
      case EquationKind::GoodmanMassey: {
        const auto [sol, trace] = solve_goodman_massey(net);
        print_solution(sol, out);
        out << "iterations: " << trace.inner_iterations_total << "\n";
        break;
      }
      case EquationKind::Overflow: {
        OverflowOptions options;
        options.best_effort = best_effort;
        const auto [sol, trace] = solve_overflow(net, options);
        print_solution(sol, out);
        out << "outer iterations: " << trace.outer_iterations << "\n";
        out << "inner iterations: " << trace.inner_iterations_total << "\n";
        if (best_effort) out << "note: best-effort mode, Condition 2 not verified\n";
        break;
      }
    }
  } catch (const SolveError& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    for (const NodeSet& w : e.witness()) err << "witness: " << format_set(w) << "\n";
    return exit_code_for(e);
  }
  return kExitOk;
}

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
  Network net;
  try {
    net = load_network(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  ConditionReport report;
  try {
    report = assess_conditions(net);
  } catch (const SolveError& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  }
  const ClassDecomposition& dec = report.classes;
  out << "classes: " << dec.size() << "\n";
  for (std::size_t k = 0; k < dec.size(); ++k) {
    out << "  C" << k + 1 << " " << format_set(dec.classes[k]) << " level " << dec.levels[k]
        << ": fillable " << yes_no(dec.fillable[k]) << ", externally drainable "
        << yes_no(dec.ext_drainable[k]) << ", internally drainable " << yes_no(dec.int_drainable[k])
        << ", isolated " << yes_no(dec.isolated[k]) << "\n";
  }
  out << "FD: " << yes_no(report.fd) << ", NI: " << yes_no(report.ni) << "\n";
  out << "U*: " << format_set(report.u_star) << (report.ni ? "" : " (least fixed point)") << "\n";
  const Condition2Verdict& c2 = report.cond2;
  out << "Condition 2: " << to_string(c2.kind);
  if (c2.kind == Condition2Verdict::Kind::FailsWitness || c2.kind == Condition2Verdict::Kind::Marginal) {
    out << ", witness A=" << format_set(c2.witness) << ", σ=" << fmt(c2.radius, 10);
  }
  out << "\n";
  if (!c2.reason.empty()) out << "  (" << c2.reason << ")\n";
  return kExitOk;
}

int cmd_oracle(const std::string& path, std::ostream& out, std::ostream& err) {
  Network net;
  try {
    net = load_network(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  OracleVerdict v;
  try {
    v = oracle_enumerate(net);
  } catch (const OracleTooLarge& e) {
    err << "error (TooLarge): " << e.what() << "\n";
    return kExitInputError;
  }
  out << to_string(v.kind) << " (" << v.patterns_checked << " patterns checked)\n";
  for (std::size_t k = 0; k < v.solutions.size(); ++k) {
    out << "solution S=" << format_set(v.patterns[k]) << ": " << format_vector(v.solutions[k]) << "\n";
  }
  for (const OracleContinuum& c : v.continua) {
    out << "continuum S=" << format_set(c.pattern) << ": base " << format_vector(c.base);
    for (const Vector& d : c.directions) out << " + t " << format_vector(d);
    if (c.directions.size() == 1) out << ", t in [" << fmt(c.t_min) << ", " << fmt(c.t_max) << "]";
    out << "\n";
  }
  return kExitOk;
}

int cmd_worstcase(std::size_t n_max, std::ostream& out, std::ostream& err) {
  if (n_max < 1) {
    err << "error: n-max must be at least 1\n";
    return kExitInputError;
  }
  int status = kExitOk;
  out << "n,expected_inner,actual_inner,outer,residual,status\n";
  for (std::size_t n = 1; n <= n_max; ++n) {
    const std::size_t expected = 1 + n * (n + 1) / 2;
    try {
      const auto [sol, trace] = solve_overflow(gen_example2(n));
      const bool pass = trace.inner_iterations_total == expected && sol.residual < kResidualTolerance;
      out << n << "," << expected << "," << trace.inner_iterations_total << ","
          << trace.outer_iterations << "," << fmt(sol.residual, 3) << "," << (pass ? "pass" : "FAIL")
          << "\n";
      if (!pass) status = kExitNonConvergence;
    } catch (const SolveError& e) {
      out << n << "," << expected << ",,,," << "FAIL\n";
      err << "n=" << n << ": " << e.what() << "\n";
      status = exit_code_for(e);
    }
  }
  return status;
}

Network generate(const GenRequest& request) {
  if (request.name == "example1") return gen_example1(request.grid);
  if (request.name == "example2") return gen_example2(request.n);
  if (request.name == "example3") return gen_example3();
  if (request.name == "example4") return gen_example4(request.alpha1);
  if (request.name == "random") return gen_random(request.random);
  throw std::invalid_argument("unknown generator \"" + request.name + "\"");
}

int cmd_gen(const GenRequest& request, std::ostream& out, std::ostream& err) {
  try {
    const Network net = generate(request);
    if (request.out_path.empty()) {
      out << serialize_network(net);
    } else {
      save_network(net, request.out_path);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace trafficflow::cli
