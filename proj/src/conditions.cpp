#include "trafficflow/conditions.hpp"

#include "trafficflow/solvers.hpp"

namespace trafficflow {

ConditionReport assess_conditions(const Network& net, const Condition2Options& options) {
  require_valid(net);
  ConditionReport report;
  report.classes = decompose(net);
  report.ni = report.classes.isolated_classes().empty();
  report.fd = check_fd(net);
  if (report.ni) {
    report.u_star = solve_goodman_massey(net).first.unstable_set;
  } else {
    report.u_star = tarski_iterate(without_overflow(net)).unstable_set;
  }
  report.cond2 = check_condition2(net, report.u_star, options);
  return report;
}

}  // namespace trafficflow
