#include "netdrift/community.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace netdrift {

Partition Partition::from_blocks(int n, std::vector<std::vector<int>> in_blocks) {
  std::vector<char> covered(n, 0);
  for (auto& block : in_blocks) {
    if (block.empty()) throw std::invalid_argument("partition: empty block");
    std::sort(block.begin(), block.end());
    for (int v : block) {
      if (v < 0 || v >= n) throw std::invalid_argument("partition: node out of range");
      if (covered[v]) throw std::invalid_argument("partition: node " + std::to_string(v) + " in two blocks");
      covered[v] = 1;
    }
  }
  for (int v = 0; v < n; ++v)
    if (!covered[v]) throw std::invalid_argument("partition: node " + std::to_string(v) + " uncovered");

  std::sort(in_blocks.begin(), in_blocks.end(),
            [](const std::vector<int>& x, const std::vector<int>& y) { return x.front() < y.front(); });
  Partition p;
  p.blocks = std::move(in_blocks);
  p.block_of.assign(n, -1);
  for (int b = 0; b < p.block_count(); ++b)
    for (int v : p.blocks[b]) p.block_of[v] = b;
  return p;
}

Partition Partition::from_block_ids(const std::vector<int>& ids) {
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < static_cast<int>(ids.size()); ++v) groups[ids[v]].push_back(v);
  std::vector<std::vector<int>> blocks;
  blocks.reserve(groups.size());
  for (auto& [id, members] : groups) blocks.push_back(std::move(members));
  return from_blocks(static_cast<int>(ids.size()), std::move(blocks));
}

Partition Partition::single_block(int n) {
  if (n < 1) throw std::invalid_argument("partition: single block needs n >= 1");
  std::vector<int> all(n);
  for (int v = 0; v < n; ++v) all[v] = v;
  return from_blocks(n, {std::move(all)});
}

namespace {

// Adjacency annotated with edge ids; girvan_newman erases entries as edges
// are removed.
struct AdjView {
  int n = 0;
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, edge id)
};

AdjView make_adj_view(const Graph& g) {
  AdjView view;
  view.n = g.node_count();
  view.adj.assign(view.n, {});
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
    const auto& [u, v] = g.edges()[e];
    view.adj[u].emplace_back(v, e);
    view.adj[v].emplace_back(u, e);
  }
  return view;
}

// Brandes single-source accumulation summed over all sources; each unordered
// pair is reached from both endpoints, so the total is halved at the end.
std::vector<double> betweenness_on(const AdjView& view, std::size_t edge_total) {
  std::vector<double> score(edge_total, 0.0);
  const int n = view.n;
  std::vector<int> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::vector<std::pair<int, int>>> pred(n);  // (node, edge id)
  std::vector<int> order;
  order.reserve(n);

  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : pred) p.clear();
    order.clear();

    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const int v = order[head];
      for (const auto& [w, eid] : view.adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].emplace_back(v, eid);
        }
      }
    }
    for (std::size_t i = order.size(); i-- > 1;) {
      const int w = order[i];
      for (const auto& [v, eid] : pred[w]) {
        const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
        score[eid] += c;
        delta[v] += c;
      }
    }
  }
  for (double& x : score) x /= 2.0;
  return score;
}

Partition components_of(const AdjView& view) {
  const int n = view.n;
  std::vector<int> comp(n, -1);
  std::vector<int> stack;
  int c = 0;
  for (int start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    stack.assign(1, start);
    comp[start] = c;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& [w, eid] : view.adj[v]) {
        (void)eid;
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
    ++c;
  }
  return Partition::from_block_ids(comp);
}

}  // namespace

std::vector<double> edge_betweenness(const Graph& g) {
  return betweenness_on(make_adj_view(g), g.edge_count());
}

double modularity(const Graph& g, const Partition& p) {
  if (g.edge_count() == 0)
    throw std::invalid_argument("modularity: undefined for an edgeless graph");
  if (p.node_count() != g.node_count())
    throw std::invalid_argument("modularity: partition does not cover the graph");

  const double m = static_cast<double>(g.edge_count());
  std::vector<long long> within(p.block_count(), 0);
  std::vector<long long> deg_sum(p.block_count(), 0);
  for (const auto& [u, v] : g.edges()) {
    if (p.block_of[u] == p.block_of[v]) within[p.block_of[u]] += 1;
    deg_sum[p.block_of[u]] += 1;
    deg_sum[p.block_of[v]] += 1;
  }
  double q = 0.0;
  for (int b = 0; b < p.block_count(); ++b) {
    const double e_bb = within[b] / m;
    const double a_b = deg_sum[b] / (2.0 * m);
    q += e_bb - a_b * a_b;
  }
  return q;
}

GirvanNewmanResult girvan_newman(const Graph& g) {
  AdjView view = make_adj_view(g);
  const auto& edges = g.edges();
  std::vector<char> alive(edges.size(), 1);
  std::size_t alive_count = edges.size();

  GirvanNewmanResult result;
  Partition best = components_of(view);
  double best_q = edges.empty() ? std::numeric_limits<double>::quiet_NaN() : modularity(g, best);
  int prev_components = best.block_count();

  while (alive_count > 0) {
    const std::vector<double> bet = betweenness_on(view, edges.size());
    int pick = -1;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      if (!alive[e]) continue;
      if (pick < 0 || bet[e] > bet[pick]) pick = e;
      // ties resolve to the smallest (u, v): edges are in lexicographic
      // order, so the earlier index wins and nothing to do here
    }

    alive[pick] = 0;
    --alive_count;
    auto scrub = [&](int from, int eid) {
      auto& lst = view.adj[from];
      for (std::size_t i = 0; i < lst.size(); ++i) {
        if (lst[i].second == eid) {
          lst.erase(lst.begin() + static_cast<std::ptrdiff_t>(i));
          break;
        }
      }
    };
    scrub(edges[pick].first, pick);
    scrub(edges[pick].second, pick);

    Partition parts = components_of(view);
    result.dendrogram.push_back({edges[pick], bet[pick], parts.block_count()});
    if (parts.block_count() > prev_components) {
      prev_components = parts.block_count();
      const double q = modularity(g, parts);
      if (q > best_q || (q == best_q && parts.block_count() < best.block_count())) {
        best_q = q;
        best = std::move(parts);
      }
    }
  }

  result.best_partition = std::move(best);
  result.best_modularity = best_q;
  return result;
}

}  // namespace netdrift
