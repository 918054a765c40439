#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trafficflow/linalg.hpp"
#include "trafficflow/network.hpp"

namespace trafficflow {

/// Communicating classes of P and their fill/drain characterization.
struct ClassDecomposition {
  std::vector<NodeSet> classes;        ///< disjoint, covering, topological order of access
  std::vector<std::size_t> class_of;   ///< node -> index into classes
  std::vector<bool> fillable;
  std::vector<bool> ext_drainable;
  std::vector<bool> int_drainable;
  std::vector<bool> isolated;
  /// Number of other classes that can access the class.
  std::vector<std::size_t> levels;

  std::size_t size() const { return classes.size(); }
  std::vector<NodeSet> isolated_classes() const;
};

/// Strongly connected components of the incidence digraph of p. Only the
/// classes and class_of fields are filled in.
ClassDecomposition communicating_classes(const DenseMatrix& p);

/// Fills in fillable/drainable/isolated flags and levels. Throws
/// std::invalid_argument when `dec` is not the decomposition of net.p.
ClassDecomposition characterize_classes(const Network& net, ClassDecomposition dec);

/// communicating_classes followed by characterize_classes.
ClassDecomposition decompose(const Network& net);

/// No class is isolated (Q is ignored).
bool check_ni(const Network& net);
/// Every class can be filled or externally drained (Q is ignored).
bool check_fd(const Network& net);

struct Condition2Verdict {
  enum class Kind { Holds, HoldsBySufficientCheck, FailsWitness, Marginal, Unknown };

  Kind kind = Kind::Unknown;
  NodeSet witness;      ///< the set A for FailsWitness / Marginal
  double radius = 0.0;  ///< sigma(P_A + Q_{N\A}) for the witness, or of the certificate matrix
  std::string reason;   ///< which certificate decided, or why the check gave up

  bool holds() const { return kind == Kind::Holds || kind == Kind::HoldsBySufficientCheck; }
};

std::string to_string(Condition2Verdict::Kind kind);

struct Condition2Options {
  /// Largest |N \ U*| for which every subset is enumerated.
  std::size_t enumeration_limit = 22;
  /// Decide the remaining cases exactly from the closed-stochastic-set
  /// structure instead of enumerating subsets.
  bool use_closure_check = true;
};

/// Rows i in `a` taken from P, all other rows from Q (P_A + Q_{N\A}).
DenseMatrix selection_matrix(const Network& net, const NodeSet& a);

/// sigma(P_A + Q_{N\A}) < 1 for every A contained in N \ u_star.
///
/// Stages:
///  1. row-sum certificate: every admissible row has sum < 1 - 1e-9;
///  2. entrywise-max certificate: sigma(M_max) < 1 - 1e-9 where M_max takes
///     max(p_i, q_i) on N \ U* and q_i on U*;
///  3. the closed-stochastic-set check, which is exact for substochastic
///     P and Q: some selection has radius one iff closed_stochastic_core is
///     nonempty;
///  4. with the closure check disabled, every subset in canonical (bitmask)
///     order when |N \ U*| <= enumeration_limit, else Unknown.
/// Throws std::out_of_range when u_star is not a subset of N.
Condition2Verdict check_condition2(const Network& net, const NodeSet& u_star,
                                   const Condition2Options& options = {});

/// Exhaustive subset enumeration only (stage 4 above, without shortcuts).
Condition2Verdict check_condition2_enumerate(const Network& net, const NodeSet& u_star);

/// Stage 3 on its own: the largest set C in which every node can pick an
/// admissible row (P or Q for free nodes, Q for U*) with sum 1 and support
/// inside C. Empty iff Condition 2's spectral part holds.
NodeSet closed_stochastic_core(const Network& net, const NodeSet& u_star);

}  // namespace trafficflow
