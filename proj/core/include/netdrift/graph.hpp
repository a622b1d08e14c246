#pragma once

#include <utility>
#include <vector>

namespace netdrift {

// Unordered node pair, stored with first < second.
using Edge = std::pair<int, int>;

// Simple undirected graph on nodes 0..n-1: no self-loops, no duplicate
// edges. Adjacency lists are derived from the edge set and kept sorted.
class Graph {
 public:
  Graph(int n, std::vector<Edge> edges);

  int node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  // Normalized to u < v and sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// Maximal connected node sets, ordered by smallest contained node id;
// members ascending within each component.
std::vector<std::vector<int>> connected_components(const Graph& g);

bool is_connected(const Graph& g);

}  // namespace netdrift
