#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "netdrift/dynamics.hpp"

namespace netdrift {

// Exact analysis of the absorbing copy-dynamics chain over all 2^n trait
// configurations; capped so the state space stays tractable.
inline constexpr int kExactSolveMaxNodes = 14;

// bit i of the packed word = trait of node i.
std::uint32_t pack_state(const CulturalState& s);
CulturalState unpack_state(std::uint32_t bits, int n);

// One-step transition distribution out of `state` under the given stepper,
// as (next state, probability) pairs sorted by state. Probabilities sum to 1.
std::vector<std::pair<std::uint32_t, double>> transition_distribution(const Graph& g,
                                                                      const SocialTypeVector& types,
                                                                      const StepperSpec& stepper,
                                                                      std::uint32_t state);

struct AbsorptionSolution {
  double prob_all_one = 0.0;    // chance of ending in the all-1 configuration
  double expected_steps = 0.0;  // expected elementary steps until absorption
};

// Solves the absorbing Markov chain exactly: Gauss-Seidel over the transient
// states, iterated until a residual bound certifies both outputs to better
// than 1e-12. Absorbing states are exactly the per-component homogeneous
// configurations. Throws std::invalid_argument for n > kExactSolveMaxNodes.
AbsorptionSolution exact_absorption_oracle(const Graph& g, const SocialTypeVector& types,
                                           const CulturalState& s0, const StepperSpec& stepper);

}  // namespace netdrift
