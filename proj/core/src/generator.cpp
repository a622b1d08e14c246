#include "netdrift/generator.hpp"

#include <stdexcept>
#include <string>

#include "netdrift/rng.hpp"

namespace netdrift {

void GeneratorParams::validate() const {
  if (n < 2) throw std::invalid_argument("generator: n must be >= 2");
  if (!(p_within >= 0.0 && p_within <= 1.0))
    throw std::invalid_argument("generator: p_within outside [0,1]");
  if (!(p_between >= 0.0 && p_between <= 1.0))
    throw std::invalid_argument("generator: p_between outside [0,1]");
  if (connectivity == ConnectivityPolicy::kResampleUntilConnected && max_attempts < 1)
    throw std::invalid_argument("generator: max_attempts must be >= 1");
}

namespace {

SocialTypeVector assign_types(const GeneratorParams& params, RngStream& rng) {
  SocialTypeVector types(params.n, 0);
  if (params.type_assignment == TypeAssignment::kUniformRandom) {
    for (auto& t : types) t = static_cast<std::uint8_t>(rng.uniform_index(2));
  } else {
    // floor(n/2) ones, placement shuffled
    for (int v = params.n - params.n / 2; v < params.n; ++v) types[v] = 1;
    rng.shuffle(types);
  }
  return types;
}

}  // namespace

std::pair<Graph, SocialTypeVector> generate_planted_partition(const GeneratorParams& params) {
  params.validate();
  RngStream rng(params.seed);
  const bool resample = params.connectivity == ConnectivityPolicy::kResampleUntilConnected;
  const int attempts = resample ? params.max_attempts : 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    SocialTypeVector types = assign_types(params, rng);
    std::vector<Edge> edges;
    for (int u = 0; u + 1 < params.n; ++u) {
      for (int v = u + 1; v < params.n; ++v) {
        const double p = types[u] == types[v] ? params.p_within : params.p_between;
        if (rng.bernoulli(p)) edges.emplace_back(u, v);
      }
    }
    Graph g(params.n, std::move(edges));
    if (!resample || is_connected(g)) return {std::move(g), std::move(types)};
  }
  throw std::runtime_error("generator: no connected graph within " +
                           std::to_string(params.max_attempts) + " attempts");
}

}  // namespace netdrift
