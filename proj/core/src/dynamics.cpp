#include "netdrift/dynamics.hpp"

#include <stdexcept>
#include <utility>

namespace netdrift {

void BiasMatrix::validate() const {
  for (int t = 0; t < 2; ++t)
    for (int y = 0; y < 2; ++y)
      if (!(accept[t][y] > 0.0 && accept[t][y] <= 1.0))
        throw std::invalid_argument("bias matrix: entries must lie in (0, 1]");
}

CulturalState init_uniform_traits(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("init_uniform_traits: n must be >= 1");
  CulturalState s(n);
  for (auto& trait : s) trait = static_cast<std::uint8_t>(rng.uniform_index(2));
  return s;
}

namespace {

struct StepDraw {
  int node = -1;
  std::uint8_t incoming = 0;
  bool has_neighbor = false;
  bool accepted = false;
};

// One elementary draw: node, neighbor's trait, acceptance. `types`/`beta`
// are null for the neutral stepper (the copy is then always accepted).
StepDraw draw_step(const Graph& g, const CulturalState& s, const SocialTypeVector* types,
                   const BiasMatrix* beta, RngStream& rng) {
  StepDraw d;
  d.node = rng.uniform_int(g.node_count());
  const auto& nb = g.neighbors(d.node);
  if (nb.empty()) return d;
  d.has_neighbor = true;
  d.incoming = s[nb[rng.uniform_index(nb.size())]];
  d.accepted = beta == nullptr ? true : rng.bernoulli(beta->accept[(*types)[d.node]][d.incoming]);
  return d;
}

}  // namespace

bool neutral_step(const Graph& g, CulturalState& s, StepClock& clock, RngStream& rng) {
  if (s.size() != static_cast<std::size_t>(g.node_count()))
    throw std::invalid_argument("neutral_step: state length mismatch");
  const StepDraw d = draw_step(g, s, nullptr, nullptr, rng);
  clock.steps += 1;
  if (!d.has_neighbor) return false;
  const bool changed = s[d.node] != d.incoming;
  s[d.node] = d.incoming;
  return changed;
}

bool biased_step(const Graph& g, CulturalState& s, const SocialTypeVector& types,
                 const BiasMatrix& beta, StepClock& clock, RngStream& rng) {
  if (s.size() != static_cast<std::size_t>(g.node_count()) || types.size() != s.size())
    throw std::invalid_argument("biased_step: state/type length mismatch");
  beta.validate();
  const StepDraw d = draw_step(g, s, &types, &beta, rng);
  clock.steps += 1;
  if (!d.has_neighbor || !d.accepted) return false;
  const bool changed = s[d.node] != d.incoming;
  s[d.node] = d.incoming;
  return changed;
}

bool is_absorbed(const CulturalState& s, const Graph& g) {
  if (s.size() != static_cast<std::size_t>(g.node_count()))
    throw std::invalid_argument("is_absorbed: state length mismatch");
  for (const auto& comp : connected_components(g)) {
    for (int v : comp) {
      if (s[v] != s[comp.front()]) return false;
    }
  }
  return true;
}

TrajectoryRecord run(const Graph& g, const SocialTypeVector& types, CulturalState s0,
                     const StepperSpec& stepper, const RunOptions& opts, RngStream& rng) {
  const int n = g.node_count();
  if (opts.budget < 1) throw std::invalid_argument("run: budget must be >= 1");
  if (opts.record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");
  if (static_cast<int>(s0.size()) != n || static_cast<int>(types.size()) != n)
    throw std::invalid_argument("run: state/type length mismatch");
  const bool biased = stepper.kind == StepperSpec::Kind::kBiased;
  if (biased) stepper.beta.validate();

  CulturalState s = std::move(s0);

  // Per-component trait-1 counts make the absorption check O(1) per step.
  const auto comps = connected_components(g);
  std::vector<int> comp_of(n, -1);
  std::vector<int> comp_size(comps.size(), 0), comp_ones(comps.size(), 0);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
    comp_size[c] = static_cast<int>(comps[c].size());
    for (int v : comps[c]) {
      comp_of[v] = c;
      comp_ones[c] += s[v];
    }
  }
  int unsettled = 0;
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    if (comp_ones[c] != 0 && comp_ones[c] != comp_size[c]) ++unsettled;

  ContingencyTable table = contingency_from_state(types, s);

  TrajectoryRecord rec;
  rec.n = n;
  auto record_sample = [&](long long step, bool absorbed_now) {
    TrajectorySample sample;
    sample.step = step;
    sample.table = table;
    sample.chi2 = chi_squared(table).statistic;
    sample.absorbed = absorbed_now;
    rec.samples.push_back(sample);
    if (opts.capture_states) rec.states.push_back(s);
  };

  bool absorbed = unsettled == 0;
  record_sample(0, absorbed);
  if (absorbed) {
    rec.absorbed = true;
    rec.absorption_step = 0;
    if (opts.stop_on_absorption) return rec;
  }

  for (long long step = 1; step <= opts.budget; ++step) {
    const StepDraw d = draw_step(g, s, biased ? &types : nullptr, biased ? &stepper.beta : nullptr, rng);
    if (d.has_neighbor && (!biased || d.accepted) && s[d.node] != d.incoming) {
      const std::uint8_t old_trait = s[d.node];
      s[d.node] = d.incoming;
      table.counts[types[d.node]][old_trait] -= 1;
      table.counts[types[d.node]][d.incoming] += 1;

      const int c = comp_of[d.node];
      const bool was_settled = comp_ones[c] == 0 || comp_ones[c] == comp_size[c];
      comp_ones[c] += d.incoming == 1 ? 1 : -1;
      const bool now_settled = comp_ones[c] == 0 || comp_ones[c] == comp_size[c];
      if (was_settled && !now_settled) ++unsettled;
      if (!was_settled && now_settled) --unsettled;

      if (!absorbed && unsettled == 0) {
        absorbed = true;
        rec.absorbed = true;
        rec.absorption_step = step;
        if (opts.stop_on_absorption) {
          record_sample(step, true);
          rec.total_steps = step;
          return rec;
        }
      }
    }
    if (step % opts.record_every == 0) record_sample(step, absorbed);
  }
  rec.total_steps = opts.budget;
  return rec;
}

}  // namespace netdrift
