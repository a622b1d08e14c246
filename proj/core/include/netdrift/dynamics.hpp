#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "netdrift/generator.hpp"
#include "netdrift/graph.hpp"
#include "netdrift/rng.hpp"
#include "netdrift/stats.hpp"

namespace netdrift {

// accept[type][trait]: probability that a node of the given social type
// accepts a copied value of the given trait. All entries must lie in (0, 1];
// the all-ones matrix reproduces the neutral dynamics exactly.
struct BiasMatrix {
  std::array<std::array<double, 2>, 2> accept{{{1.0, 1.0}, {1.0, 1.0}}};

  void validate() const;  // throws std::invalid_argument
};

struct StepperSpec {
  enum class Kind { kNeutral, kBiased };

  Kind kind = Kind::kNeutral;
  BiasMatrix beta;  // used only when kind == kBiased

  static StepperSpec neutral() { return {}; }
  static StepperSpec biased(const BiasMatrix& beta) { return {Kind::kBiased, beta}; }
};

// Elementary copy attempts since initialization; one sweep = n steps.
struct StepClock {
  long long steps = 0;

  double sweeps(int n) const { return static_cast<double>(steps) / n; }
};

// Each node's trait i.i.d. equiprobable over {0, 1}.
CulturalState init_uniform_traits(int n, RngStream& rng);

// One elementary step: a uniformly chosen node copies the trait of a
// uniformly chosen neighbor. A neighborless node consumes the step without
// change. Returns whether a trait changed; the clock always advances by 1.
bool neutral_step(const Graph& g, CulturalState& s, StepClock& clock, RngStream& rng);

// As neutral_step, except the copy is kept only with probability
// beta.accept[type(node)][incoming trait].
bool biased_step(const Graph& g, CulturalState& s, const SocialTypeVector& types,
                 const BiasMatrix& beta, StepClock& clock, RngStream& rng);

// True iff every connected component is trait-homogeneous; such states are
// fixed points of both steppers.
bool is_absorbed(const CulturalState& s, const Graph& g);

struct TrajectorySample {
  long long step = 0;
  ContingencyTable table;  // social type x trait counts, summing to n
  double chi2 = 0.0;
  bool absorbed = false;
};

struct RunOptions {
  long long budget = 0;        // elementary steps; must be >= 1
  long long record_every = 1;  // sampling period in steps; must be >= 1
  bool stop_on_absorption = true;
  bool capture_states = false;  // keep a trait snapshot per sample
};

struct TrajectoryRecord {
  int n = 0;
  std::vector<TrajectorySample> samples;
  std::vector<CulturalState> states;  // parallel to samples when captured
  bool absorbed = false;
  long long absorption_step = -1;
  long long total_steps = 0;
};

// Applies the stepper for up to budget steps, recording the contingency
// table and chi-squared at step 0 and every record_every steps. On
// absorption the absorbing sample is recorded (even off schedule) and, with
// stop_on_absorption, the run ends early. Deterministic given the stream.
TrajectoryRecord run(const Graph& g, const SocialTypeVector& types, CulturalState s0,
                     const StepperSpec& stepper, const RunOptions& opts, RngStream& rng);

}  // namespace netdrift
