#pragma once

#include <optional>
#include <string>

#include "trafficflow/network.hpp"
#include "trafficflow/structure.hpp"

namespace trafficflow {

struct ConditionReport {
  bool ni = false;
  bool fd = false;
  /// Unstable set of the Goodman-Massey solution. For networks that are not
  /// NI it comes from the least fixed point instead.
  NodeSet u_star;
  Condition2Verdict cond2;
  ClassDecomposition classes;
};

ConditionReport assess_conditions(const Network& net, const Condition2Options& options = {});

}  // namespace trafficflow
