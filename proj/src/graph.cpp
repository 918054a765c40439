#include "trafficflow/graph.hpp"

#include <algorithm>
#include <limits>

namespace trafficflow {

std::vector<std::vector<std::size_t>> incidence_graph(const DenseMatrix& m) {
  std::vector<std::vector<std::size_t>> graph(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) > 0.0) graph[i].push_back(j);
    }
  }
  return graph;
}

std::vector<NodeSet> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& graph) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  const std::size_t n = graph.size();

  std::vector<std::size_t> index(n, kUnvisited);
  std::vector<std::size_t> lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<NodeSet> components;
  std::size_t next_index = 0;

  // (vertex, position in its successor list)
  std::vector<std::pair<std::size_t, std::size_t>> call_stack;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call_stack.emplace_back(root, 0);
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call_stack.empty()) {
      auto& [v, pos] = call_stack.back();
      if (pos < graph[v].size()) {
        const std::size_t w = graph[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }

      const std::size_t finished = v;
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const std::size_t parent = call_stack.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[finished]);
      }
      if (lowlink[finished] == index[finished]) {
        NodeSet component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != finished);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
    }
  }

  // Tarjan emits sinks first.
  std::reverse(components.begin(), components.end());
  return components;
}

std::vector<bool> reachable_from(const std::vector<std::vector<std::size_t>>& graph,
                                 const NodeSet& sources) {
  std::vector<bool> seen(graph.size(), false);
  std::vector<std::size_t> frontier;
  for (std::size_t s : sources) {
    if (!seen[s]) {
      seen[s] = true;
      frontier.push_back(s);
    }
  }
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    for (std::size_t w : graph[v]) {
      if (!seen[w]) {
        seen[w] = true;
        frontier.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace trafficflow
