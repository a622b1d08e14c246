#include "netdrift/mixing.hpp"

#include <limits>
#include <stdexcept>

namespace netdrift {

MixingSummary mixing_summary(const Graph& g, const SocialTypeVector& types) {
  if (types.size() != static_cast<std::size_t>(g.node_count()))
    throw std::invalid_argument("mixing_summary: type vector length mismatch");
  if (g.edge_count() == 0)
    throw std::invalid_argument("mixing_summary: undefined for an edgeless graph");

  long long ends[2][2] = {{0, 0}, {0, 0}};
  for (const auto& [u, v] : g.edges()) {
    ends[types[u]][types[v]] += 1;
    ends[types[v]][types[u]] += 1;
  }
  const long long end_total = 2 * static_cast<long long>(g.edge_count());
  const double total = static_cast<double>(end_total);

  MixingSummary s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s.e[i][j] = ends[i][j] / total;
  for (int i = 0; i < 2; ++i) s.a[i] = s.e[i][0] + s.e[i][1];

  // With every edge-end in a single class the denominator 1 - sum a_i^2
  // vanishes; report a flagged undefined coefficient.
  const long long ends_of_type0 = ends[0][0] + ends[0][1];
  if (ends_of_type0 == 0 || ends_of_type0 == end_total) {
    s.r = std::numeric_limits<double>::quiet_NaN();
    s.r_defined = false;
  } else {
    const double trace = s.e[0][0] + s.e[1][1];
    const double a2 = s.a[0] * s.a[0] + s.a[1] * s.a[1];
    s.r = (trace - a2) / (1.0 - a2);
    s.r_defined = true;
  }
  return s;
}

}  // namespace netdrift
