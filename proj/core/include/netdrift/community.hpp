#pragma once

#include <vector>

#include "netdrift/graph.hpp"

namespace netdrift {

// Disjoint cover of nodes 0..n-1. Blocks are sorted internally, ordered by
// smallest member, and block ids are dense from 0 in that order.
struct Partition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of;

  // Validate and canonicalize. Throw std::invalid_argument on empty blocks,
  // overlaps, or uncovered nodes.
  static Partition from_blocks(int n, std::vector<std::vector<int>> blocks);
  static Partition from_block_ids(const std::vector<int>& ids);
  static Partition single_block(int n);

  int node_count() const { return static_cast<int>(block_of.size()); }
  int block_count() const { return static_cast<int>(blocks.size()); }
};

// Shortest-path edge betweenness with unit edge lengths; multiple shortest
// paths split a pair's unit weight equally. Each unordered node pair
// contributes once. Indexed like g.edges().
std::vector<double> edge_betweenness(const Graph& g);

struct EdgeRemoval {
  Edge edge;
  double betweenness;   // value at the time of removal
  int component_count;  // components after the removal
};

struct GirvanNewmanResult {
  std::vector<EdgeRemoval> dendrogram;  // one entry per removed edge
  Partition best_partition;             // max-modularity component cut observed
  double best_modularity = 0.0;         // NaN for an edgeless input graph
};

// Divisive community detection: repeatedly recompute edge betweenness on the
// current graph and remove one maximum-betweenness edge (ties: smallest
// (u, v)) until no edges remain. Among the component partitions observed,
// returns the one maximizing modularity on the input graph (ties: fewest
// blocks, then earliest).
GirvanNewmanResult girvan_newman(const Graph& g);

// Newman modularity Q of a partition, computed on g's edge set. Throws
// std::invalid_argument for an edgeless graph.
double modularity(const Graph& g, const Partition& p);

}  // namespace netdrift
