#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "trafficflow/generators.hpp"
#include "trafficflow/network.hpp"

namespace trafficflow::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitNotNI = 2,
  kExitConditionFailure = 3,
  kExitNonConvergence = 4,
};

/// "[x1, x2, ...]" with 17 significant digits.
std::string format_vector(const Vector& v);
/// "{1,3}" using 1-based node labels.
std::string format_set(const NodeSet& set);

int cmd_solve(const std::string& path, EquationKind kind, bool best_effort, std::ostream& out,
              std::ostream& err);
int cmd_check(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::string& path, std::ostream& out, std::ostream& err);
/// Runs the worst-case family for n = 1..n_max and compares the number of
/// inner iterations against 1 + n(n+1)/2.
int cmd_worstcase(std::size_t n_max, std::ostream& out, std::ostream& err);

struct GenRequest {
  std::string name;  ///< example1, example2, example3, example4 or random
  CellGridSpec grid;
  std::size_t n = 3;
  double alpha1 = 1.0;
  RandomSpec random;
  std::string out_path;  ///< empty writes to `out`
};

Network generate(const GenRequest& request);
int cmd_gen(const GenRequest& request, std::ostream& out, std::ostream& err);

}  // namespace trafficflow::cli
