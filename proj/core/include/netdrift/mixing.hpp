#pragma once

#include <array>

#include "netdrift/generator.hpp"
#include "netdrift/graph.hpp"

namespace netdrift {

// Edge-end mixing summary for a binary node attribute. Each undirected edge
// counts as two directed edge-ends, so e is symmetric and sums to 1.
struct MixingSummary {
  std::array<std::array<double, 2>, 2> e{};  // fraction of ends from type i to type j
  std::array<double, 2> a{};                 // marginal end fractions, a[i] = sum_j e[i][j]
  double r = 0.0;                            // assortativity coefficient; NaN when undefined
  bool r_defined = false;                    // false when every edge-end lies in one class
};

// Throws std::invalid_argument for an edgeless graph or a length mismatch.
MixingSummary mixing_summary(const Graph& g, const SocialTypeVector& types);

}  // namespace netdrift
