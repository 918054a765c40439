#pragma once

#include <cstddef>
#include <vector>

#include "trafficflow/linalg.hpp"

namespace trafficflow {

/// Adjacency lists of the incidence digraph of a square matrix: edge i -> j
/// iff m(i, j) > 0.
std::vector<std::vector<std::size_t>> incidence_graph(const DenseMatrix& m);

/// Strongly connected components in topological order: if a component can
/// reach another, it is listed first. Members of each component are sorted.
/// Iterative Tarjan, safe for large graphs.
std::vector<NodeSet> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& graph);

/// Nodes reachable from `sources` (sources included).
std::vector<bool> reachable_from(const std::vector<std::vector<std::size_t>>& graph,
                                 const NodeSet& sources);

}  // namespace trafficflow
