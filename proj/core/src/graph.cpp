#include "netdrift/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace netdrift {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 0) throw std::invalid_argument("graph: negative node count");
  for (auto& [u, v] : edges_) {
    if (u == v) throw std::invalid_argument("graph: self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n_) throw std::invalid_argument("graph: edge endpoint out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("graph: duplicate edge");

  adj_.assign(n_, {});
  for (const auto& [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
  const int n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> components;
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    stack.assign(1, start);
    seen[start] = 1;
    std::vector<int> comp;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

bool is_connected(const Graph& g) {
  if (g.node_count() <= 1) return true;
  return connected_components(g).size() == 1;
}

}  // namespace netdrift
