#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "netdrift/graph.hpp"

namespace netdrift {

// Per-node social type in {0, 1}; fixed for the lifetime of a run.
using SocialTypeVector = std::vector<std::uint8_t>;

enum class TypeAssignment {
  kUniformRandom,   // i.i.d. equiprobable labels
  kExactHalfSplit,  // exactly floor(n/2) nodes of type 1, positions shuffled
};

enum class ConnectivityPolicy {
  kAllowDisconnected,
  kResampleUntilConnected,
};

struct GeneratorParams {
  int n = 100;
  double p_within = 0.09;   // edge probability for same-type pairs
  double p_between = 0.01;  // edge probability for cross-type pairs
  TypeAssignment type_assignment = TypeAssignment::kExactHalfSplit;
  std::uint64_t seed = 0;
  ConnectivityPolicy connectivity = ConnectivityPolicy::kResampleUntilConnected;
  int max_attempts = 1000;  // resampling budget

  void validate() const;  // throws std::invalid_argument
};

// Two-block planted-partition sample: each node pair gets an edge
// independently, with probability p_within for same-type pairs and p_between
// otherwise. Types are assigned first, then pairs are visited in
// lexicographic order, so identical params (seed included) give identical
// results. Under kResampleUntilConnected, throws std::runtime_error naming
// the budget if no connected graph appears within max_attempts samples.
std::pair<Graph, SocialTypeVector> generate_planted_partition(const GeneratorParams& params);

}  // namespace netdrift
