#include "netdrift/graph.hpp"

#include <gtest/gtest.h>

#include "netdrift/rng.hpp"
#include "test_util.hpp"

namespace netdrift {
namespace {

TEST(Graph, NormalizesAndSortsEdges) {
  const Graph g(4, {{3, 1}, {0, 2}, {1, 0}});
  const std::vector<Edge> expected{{0, 1}, {0, 2}, {1, 3}};
  EXPECT_EQ(g.edges(), expected);
  EXPECT_EQ(g.degree(0), 2);
  EXPECT_EQ(g.degree(3), 1);
}

TEST(Graph, RejectsSelfLoop) {
  EXPECT_THROW(Graph(3, {{1, 1}}), std::invalid_argument);
}

TEST(Graph, RejectsDuplicateEdge) {
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST(Graph, RejectsOutOfRangeEndpoint) {
  EXPECT_THROW(Graph(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{-1, 1}}), std::invalid_argument);
}

TEST(Graph, AdjacencyIsSymmetricAndDegreeSumMatches) {
  RngStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(20));
    std::vector<Edge> edges;
    for (int u = 0; u + 1 < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.bernoulli(0.3)) edges.emplace_back(u, v);
    const Graph g(n, edges);

    long long degree_sum = 0;
    for (int v = 0; v < n; ++v) {
      degree_sum += g.degree(v);
      for (int w : g.neighbors(v)) {
        const auto& back = g.neighbors(w);
        EXPECT_TRUE(std::find(back.begin(), back.end(), v) != back.end());
      }
    }
    EXPECT_EQ(degree_sum, 2 * static_cast<long long>(g.edge_count()));
  }
}

TEST(ConnectedComponents, CompleteGraphIsOneComponent) {
  const auto comps = connected_components(testutil::complete_graph(5));
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0].size(), 5u);
}

TEST(ConnectedComponents, EdgelessGraphIsAllSingletons) {
  const auto comps = connected_components(Graph(3, {}));
  ASSERT_EQ(comps.size(), 3u);
  for (int v = 0; v < 3; ++v) EXPECT_EQ(comps[v], std::vector<int>{v});
}

TEST(ConnectedComponents, TwoCliquePairs) {
  const Graph g(4, {{0, 1}, {2, 3}});
  const auto comps = connected_components(g);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(comps[1], (std::vector<int>{2, 3}));
}

TEST(ConnectedComponents, OrderedBySmallestNode) {
  const Graph g(5, {{4, 2}, {1, 3}});
  const auto comps = connected_components(g);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[0].front(), 0);
  EXPECT_EQ(comps[1].front(), 1);
  EXPECT_EQ(comps[2].front(), 2);
}

TEST(IsConnected, Basics) {
  EXPECT_TRUE(is_connected(testutil::path_graph(6)));
  EXPECT_FALSE(is_connected(Graph(3, {{0, 1}})));
  EXPECT_TRUE(is_connected(Graph(1, {})));
}

}  // namespace
}  // namespace netdrift
