#include "netdrift/stats.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace netdrift {
namespace {

ContingencyTable table(long long a, long long b, long long c, long long d) {
  ContingencyTable t;
  t.counts = {{{a, b}, {c, d}}};
  return t;
}

// The 2x2 closed form, evaluated independently of the implementation.
double closed_form(long long a, long long b, long long c, long long d) {
  const double n = static_cast<double>(a + b + c + d);
  const double diff = static_cast<double>(a) * d - static_cast<double>(b) * c;
  return n * diff * diff /
         (static_cast<double>(a + b) * (c + d) * (a + c) * (b + d));
}

TEST(Contingency, DirectCount) {
  const SocialTypeVector types{0, 0, 1, 1};
  const CulturalState traits{1, 1, 0, 0};
  const ContingencyTable t = contingency_from_state(types, traits);
  EXPECT_EQ(t.counts[0][0], 0);
  EXPECT_EQ(t.counts[0][1], 2);
  EXPECT_EQ(t.counts[1][0], 2);
  EXPECT_EQ(t.counts[1][1], 0);
}

TEST(Contingency, EmptySubsetGivesZeroTable) {
  const SocialTypeVector types{0, 1};
  const CulturalState traits{1, 0};
  const ContingencyTable t = contingency_from_state(types, traits, {});
  EXPECT_EQ(t.total(), 0);
}

TEST(Contingency, EntriesSumToSubsetSize) {
  RngStream rng(3);
  const int n = 40;
  SocialTypeVector types(n);
  CulturalState traits(n);
  for (int v = 0; v < n; ++v) {
    types[v] = static_cast<std::uint8_t>(rng.uniform_index(2));
    traits[v] = static_cast<std::uint8_t>(rng.uniform_index(2));
  }
  EXPECT_EQ(contingency_from_state(types, traits).total(), n);
  const std::vector<int> subset{0, 5, 7, 12, 33};
  EXPECT_EQ(contingency_from_state(types, traits, subset).total(),
            static_cast<long long>(subset.size()));
}

TEST(ChiSquared, ExactIndependenceIsZero) {
  const ChiSquaredResult r = chi_squared(table(25, 25, 25, 25));
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.df, 1);
}

TEST(ChiSquared, HandEvaluatedValues) {
  EXPECT_DOUBLE_EQ(chi_squared(table(30, 20, 20, 30)).statistic, 4.0);
  EXPECT_DOUBLE_EQ(chi_squared(table(50, 0, 0, 50)).statistic, 100.0);
}

TEST(ChiSquared, DegenerateMargins) {
  for (const auto& t : {table(0, 0, 10, 20), table(10, 20, 0, 0), table(0, 10, 0, 20),
                        table(10, 0, 20, 0), table(0, 0, 0, 0)}) {
    const ChiSquaredResult r = chi_squared(t);
    EXPECT_TRUE(r.degenerate);
    EXPECT_DOUBLE_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.df, 0);
    EXPECT_FALSE(r.p_defined);
  }
}

TEST(ChiSquared, SymmetryInvariances) {
  RngStream rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const long long a = rng.uniform_index(30) + 1, b = rng.uniform_index(30) + 1,
                    c = rng.uniform_index(30) + 1, d = rng.uniform_index(30) + 1;
    const double base = chi_squared(table(a, b, c, d)).statistic;
    EXPECT_DOUBLE_EQ(chi_squared(table(c, d, a, b)).statistic, base);  // row swap
    EXPECT_DOUBLE_EQ(chi_squared(table(b, a, d, c)).statistic, base);  // column swap
    EXPECT_DOUBLE_EQ(chi_squared(table(a, c, b, d)).statistic, base);  // transpose
  }
}

TEST(ChiSquared, ScalingByIntegerScalesStatistic) {
  RngStream rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const long long a = rng.uniform_index(20) + 1, b = rng.uniform_index(20) + 1,
                    c = rng.uniform_index(20) + 1, d = rng.uniform_index(20) + 1;
    const long long k = 1 + static_cast<long long>(rng.uniform_index(5));
    const double base = chi_squared(table(a, b, c, d)).statistic;
    const double scaled = chi_squared(table(k * a, k * b, k * c, k * d)).statistic;
    EXPECT_NEAR(scaled, k * base, 1e-9 * std::max(1.0, k * base));
  }
}

TEST(ChiSquared, ZeroIffProportionalAndBounded) {
  RngStream rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const long long a = rng.uniform_index(40), b = rng.uniform_index(40),
                    c = rng.uniform_index(40), d = rng.uniform_index(40);
    const ChiSquaredResult r = chi_squared(table(a, b, c, d));
    if (r.degenerate) continue;
    EXPECT_GE(r.statistic, 0.0);
    EXPECT_LE(r.statistic, static_cast<double>(a + b + c + d) * (1 + 1e-12));
    if (a * d == b * c) {
      EXPECT_DOUBLE_EQ(r.statistic, 0.0);
    } else {
      EXPECT_GT(r.statistic, 0.0);
    }
  }
}

TEST(ChiSquared, MatchesClosedFormOnRandomTables) {
  RngStream rng(19);
  for (int trial = 0; trial < 10000; ++trial) {
    const long long a = rng.uniform_index(100) + 1, b = rng.uniform_index(100) + 1,
                    c = rng.uniform_index(100) + 1, d = rng.uniform_index(100) + 1;
    EXPECT_NEAR(chi_squared(table(a, b, c, d)).statistic, closed_form(a, b, c, d), 1e-12);
  }
}

TEST(Survival, BasicValues) {
  EXPECT_DOUBLE_EQ(chi_squared_survival(0.0, 1), 1.0);
  EXPECT_DOUBLE_EQ(chi_squared_survival(0.0, 7), 1.0);
  EXPECT_NEAR(chi_squared_survival(3.8415, 1), 0.05, 1e-4);
  EXPECT_NEAR(chi_squared_survival(5.9915, 2), 0.05, 1e-4);
}

TEST(Survival, DfTwoIsExactExponential) {
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.9915, 10.0, 40.0}) {
    EXPECT_NEAR(chi_squared_survival(x, 2), std::exp(-x / 2.0), 1e-12);
  }
}

TEST(Survival, MatchesQuadratureOracle) {
  for (int df : {1, 2, 3, 5, 10, 50}) {
    for (double x : {0.5, 1.0, 3.8415, 10.0, 30.0, 100.0}) {
      EXPECT_NEAR(chi_squared_survival(x, df), testutil::chi2_survival_by_quadrature(x, df), 1e-8)
          << "x=" << x << " df=" << df;
    }
  }
}

TEST(Survival, MonotoneDecreasingAndPositive) {
  for (int df : {1, 2, 5}) {
    double prev = 1.0;
    for (double x = 0.0; x <= 200.0; x += 0.5) {
      const double q = chi_squared_survival(x, df);
      EXPECT_LE(q, prev + 1e-15);
      EXPECT_GT(q, 0.0);
      EXPECT_LE(q, 1.0);
      prev = q;
    }
  }
}

TEST(Survival, RejectsBadArguments) {
  EXPECT_THROW(chi_squared_survival(1.0, 0), std::invalid_argument);
  EXPECT_THROW(chi_squared_survival(-1.0, 1), std::invalid_argument);
}

TEST(Conditional, SingleBlockEqualsUnconditional) {
  RngStream rng(23);
  const int n = 30;
  for (int trial = 0; trial < 20; ++trial) {
    SocialTypeVector types(n);
    CulturalState traits(n);
    for (int v = 0; v < n; ++v) {
      types[v] = static_cast<std::uint8_t>(rng.uniform_index(2));
      traits[v] = static_cast<std::uint8_t>(rng.uniform_index(2));
    }
    const ChiSquaredResult uncond = chi_squared(contingency_from_state(types, traits));
    const ChiSquaredResult cond =
        conditional_chi_squared(types, traits, Partition::single_block(n));
    EXPECT_EQ(cond.statistic, uncond.statistic);  // bitwise: same code path per block
    EXPECT_EQ(cond.df, uncond.df);
  }
}

TEST(Conditional, HomogeneousCommunitiesAreDegenerate) {
  // traits constant within each community: every block has a zero trait margin
  const SocialTypeVector types{0, 1, 0, 1, 0, 1};
  const CulturalState traits{1, 1, 1, 0, 0, 0};
  const Partition p = Partition::from_blocks(6, {{0, 1, 2}, {3, 4, 5}});
  const ChiSquaredResult r = conditional_chi_squared(types, traits, p);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.df, 0);
  EXPECT_FALSE(r.p_defined);
}

TEST(Conditional, TwelveNodeThreeBlockHandComputation) {
  // block 0: [[0,2],[2,0]]; block 1: [[1,1],[1,1]]; block 2: [[1,2],[0,1]]
  const SocialTypeVector types{0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 1};
  const CulturalState traits{1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 1};
  const Partition p =
      Partition::from_blocks(12, {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}});
  const double expected =
      closed_form(0, 2, 2, 0) + closed_form(1, 1, 1, 1) + closed_form(1, 2, 0, 1);
  const ChiSquaredResult r = conditional_chi_squared(types, traits, p);
  EXPECT_NEAR(r.statistic, expected, 1e-12);
  EXPECT_NEAR(r.statistic, 4.0 + 0.0 + 4.0 / 9.0, 1e-12);
  EXPECT_EQ(r.df, 3);
  const auto details = per_community_chi_squared(types, traits, p);
  ASSERT_EQ(details.size(), 3u);
  EXPECT_EQ(details[0].table.counts[0][1], 2);
  EXPECT_EQ(details[2].size, 4);
}

TEST(PermutationTest, AllTraitsIdenticalGivesPOne) {
  const SocialTypeVector types{0, 1, 0, 1};
  const CulturalState traits{1, 1, 1, 1};
  RngStream rng(5);
  const auto r =
      permutation_test_conditional(types, traits, Partition::single_block(4), 50, rng);
  EXPECT_DOUBLE_EQ(r.observed, 0.0);
  EXPECT_EQ(r.exceed_count, 50);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(PermutationTest, RejectsZeroPermutations) {
  const SocialTypeVector types{0, 1};
  const CulturalState traits{0, 1};
  RngStream rng(5);
  EXPECT_THROW(
      permutation_test_conditional(types, traits, Partition::single_block(2), 0, rng),
      std::invalid_argument);
}

TEST(PermutationTest, DeterministicGivenSeed) {
  RngStream init(31);
  const int n = 24;
  SocialTypeVector types(n);
  CulturalState traits(n);
  for (int v = 0; v < n; ++v) {
    types[v] = static_cast<std::uint8_t>(init.uniform_index(2));
    traits[v] = static_cast<std::uint8_t>(init.uniform_index(2));
  }
  const Partition p = Partition::from_blocks(
      n, {{0, 1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11, 12, 13, 14, 15}, {16, 17, 18, 19, 20, 21, 22, 23}});
  RngStream rng_a(77), rng_b(77);
  const auto a = permutation_test_conditional(types, traits, p, 300, rng_a);
  const auto b = permutation_test_conditional(types, traits, p, 300, rng_b);
  EXPECT_EQ(a.exceed_count, b.exceed_count);
  EXPECT_DOUBLE_EQ(a.p_value, b.p_value);
  EXPECT_GT(a.p_value, 0.0);
  EXPECT_LE(a.p_value, 1.0);
}

TEST(PermutationTest, CalibratedUnderWithinCommunityExchangeability) {
  // Null draws: traits i.i.d. within each community with block-specific
  // rates; types fixed. Rejection at alpha = 0.05 should sit near alpha.
  const int n = 99;
  const int block_size = 33;
  SocialTypeVector types(n);
  for (int v = 0; v < n; ++v) types[v] = static_cast<std::uint8_t>(v % 2);
  std::vector<std::vector<int>> blocks(3);
  for (int v = 0; v < n; ++v) blocks[v / block_size].push_back(v);
  const Partition p = Partition::from_blocks(n, std::move(blocks));
  const double rates[3] = {0.3, 0.5, 0.7};

  RngStream rng(2024);
  int rejections = 0;
  const int draws = 500;
  for (int d = 0; d < draws; ++d) {
    CulturalState traits(n);
    for (int v = 0; v < n; ++v)
      traits[v] = static_cast<std::uint8_t>(rng.bernoulli(rates[v / block_size]) ? 1 : 0);
    const auto r = permutation_test_conditional(types, traits, p, 200, rng);
    if (r.p_value <= 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / draws;
  EXPECT_GE(rate, 0.03);
  EXPECT_LE(rate, 0.08);
}

}  // namespace
}  // namespace netdrift
