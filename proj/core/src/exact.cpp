#include "netdrift/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace netdrift {

std::uint32_t pack_state(const CulturalState& s) {
  if (s.size() > 32) throw std::invalid_argument("pack_state: too many nodes");
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i]) bits |= 1u << i;
  return bits;
}

CulturalState unpack_state(std::uint32_t bits, int n) {
  CulturalState s(n, 0);
  for (int i = 0; i < n; ++i) s[i] = static_cast<std::uint8_t>((bits >> i) & 1u);
  return s;
}

std::vector<std::pair<std::uint32_t, double>> transition_distribution(const Graph& g,
                                                                      const SocialTypeVector& types,
                                                                      const StepperSpec& stepper,
                                                                      std::uint32_t state) {
  const int n = g.node_count();
  if (n < 1 || n > kExactSolveMaxNodes)
    throw std::invalid_argument("transition_distribution: n must be in [1, " +
                                std::to_string(kExactSolveMaxNodes) + "]");
  if (static_cast<int>(types.size()) != n)
    throw std::invalid_argument("transition_distribution: type vector length mismatch");
  const bool biased = stepper.kind == StepperSpec::Kind::kBiased;
  if (biased) stepper.beta.validate();

  std::map<std::uint32_t, double> acc;
  const double pick = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const int deg = g.degree(i);
    if (deg == 0) {
      acc[state] += pick;
      continue;
    }
    const double per_neighbor = pick / deg;
    for (int j : g.neighbors(i)) {
      const int incoming = (state >> j) & 1u;
      const double accept = biased ? stepper.beta.accept[types[i]][incoming] : 1.0;
      const std::uint32_t target =
          (state & ~(1u << i)) | (static_cast<std::uint32_t>(incoming) << i);
      acc[target] += per_neighbor * accept;
      if (accept < 1.0) acc[state] += per_neighbor * (1.0 - accept);
    }
  }
  return {acc.begin(), acc.end()};
}

namespace {

std::vector<std::uint32_t> component_masks(const Graph& g) {
  std::vector<std::uint32_t> masks;
  for (const auto& comp : connected_components(g)) {
    std::uint32_t m = 0;
    for (int v : comp) m |= 1u << v;
    masks.push_back(m);
  }
  return masks;
}

}  // namespace

AbsorptionSolution exact_absorption_oracle(const Graph& g, const SocialTypeVector& types,
                                           const CulturalState& s0, const StepperSpec& stepper) {
  const int n = g.node_count();
  if (n < 1 || n > kExactSolveMaxNodes)
    throw std::invalid_argument("exact_absorption_oracle: supports 1 <= n <= " +
                                std::to_string(kExactSolveMaxNodes) + ", got " + std::to_string(n));
  if (static_cast<int>(s0.size()) != n || static_cast<int>(types.size()) != n)
    throw std::invalid_argument("exact_absorption_oracle: state/type length mismatch");

  const std::uint32_t state_count = 1u << n;
  const std::uint32_t full = state_count - 1;
  const auto masks = component_masks(g);
  auto absorbing = [&](std::uint32_t s) {
    for (std::uint32_t m : masks) {
      const std::uint32_t overlap = s & m;
      if (overlap != 0 && overlap != m) return false;
    }
    return true;
  };

  const std::uint32_t start = pack_state(s0);
  if (absorbing(start)) return {start == full ? 1.0 : 0.0, 0.0};

  // Index the transient states and store their rows split into: transitions
  // to other transient states, the self probability, and the probability of
  // stepping directly into the all-1 state.
  std::vector<std::int32_t> transient_index(state_count, -1);
  std::vector<std::uint32_t> transient_states;
  for (std::uint32_t s = 0; s < state_count; ++s) {
    if (!absorbing(s)) {
      transient_index[s] = static_cast<std::int32_t>(transient_states.size());
      transient_states.push_back(s);
    }
  }
  const std::size_t t_count = transient_states.size();

  struct Entry {
    std::int32_t to;
    double p;
  };
  std::vector<std::vector<Entry>> rows(t_count);
  std::vector<double> self_p(t_count, 0.0);
  std::vector<double> to_full(t_count, 0.0);
  for (std::size_t idx = 0; idx < t_count; ++idx) {
    const std::uint32_t s = transient_states[idx];
    for (const auto& [to, p] : transition_distribution(g, types, stepper, s)) {
      if (to == s) {
        self_p[idx] += p;
      } else if (transient_index[to] >= 0) {
        rows[idx].push_back({transient_index[to], p});
      } else if (to == full) {
        to_full[idx] += p;
      }
    }
  }

  // Gauss-Seidel on x = (b + boundary + sum_t P x_t) / (1 - self_p). The
  // error of an approximate solution is bounded by tau_max * residual, where
  // tau is the expected-steps solve itself.
  auto sweep = [&](std::vector<double>& x, const std::vector<double>& b) {
    for (std::size_t i = 0; i < t_count; ++i) {
      double rhs = b[i];
      for (const auto& e : rows[i]) rhs += e.p * x[e.to];
      x[i] = rhs / (1.0 - self_p[i]);
    }
  };
  auto max_residual = [&](const std::vector<double>& x, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < t_count; ++i) {
      double rhs = b[i] + self_p[i] * x[i];
      for (const auto& e : rows[i]) rhs += e.p * x[e.to];
      worst = std::max(worst, std::fabs(x[i] - rhs));
    }
    return worst;
  };

  constexpr int kMaxSweeps = 400000;
  constexpr int kCheckEvery = 8;
  constexpr double kTargetError = 1e-13;

  // ||(I-Q)^{-1}||_inf equals max tau (row sums of a nonnegative inverse),
  // so error <= tau_max * residual. Iterate until that bound meets the
  // target, or until the residual plateaus at its floating-point floor (the
  // certified target is unreachable once it falls below rounding noise).
  std::vector<double> tau(t_count, 0.0);
  const std::vector<double> ones(t_count, 1.0);
  double tau_max = 1.0;
  auto converge = [&](std::vector<double>& x, const std::vector<double>& b) {
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxSweeps; it += kCheckEvery) {
      for (int k = 0; k < kCheckEvery; ++k) sweep(x, b);
      if (&x == &tau) tau_max = *std::max_element(tau.begin(), tau.end());
      const double res = max_residual(x, b);
      if (res * (1.0 + tau_max) < kTargetError) break;
      if (res < 1e-8 && res > prev * 0.9999) break;
      prev = res;
    }
  };
  converge(tau, ones);

  std::vector<double> h(t_count, 0.0);
  converge(h, to_full);

  const std::int32_t start_idx = transient_index[start];
  return {h[start_idx], tau[start_idx]};
}

}  // namespace netdrift
