#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "netdrift/community.hpp"
#include "netdrift/generator.hpp"
#include "netdrift/rng.hpp"

namespace netdrift {

// Per-node binary cultural trait.
using CulturalState = std::vector<std::uint8_t>;

// 2x2 cross-classification of nodes: rows = social type, columns = trait.
struct ContingencyTable {
  std::array<std::array<long long, 2>, 2> counts{};

  long long total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }
};

ContingencyTable contingency_from_state(const SocialTypeVector& types, const CulturalState& traits);

// Restricted to `subset` (an empty subset gives the all-zero table).
ContingencyTable contingency_from_state(const SocialTypeVector& types, const CulturalState& traits,
                                        const std::vector<int>& subset);

struct ChiSquaredResult {
  double statistic = 0.0;
  int df = 0;
  double p_asymptotic = std::numeric_limits<double>::quiet_NaN();
  bool p_defined = false;
  bool degenerate = false;  // a zero row or column margin
};

// Pearson chi-squared for a 2x2 table, no continuity correction:
// n (ad - bc)^2 / [(a+b)(c+d)(a+c)(b+d)], df = 1. A zero margin yields the
// degenerate result (statistic 0, df 0, p undefined) rather than an error.
ChiSquaredResult chi_squared(const ContingencyTable& t);

// Upper-tail probability of the chi-square distribution with `df` degrees of
// freedom, i.e. the regularized upper incomplete gamma Q(df/2, x/2).
// Throws std::invalid_argument unless x >= 0 and df >= 1.
double chi_squared_survival(double x, int df);

struct CommunityTestDetail {
  int community_id = 0;
  int size = 0;
  ContingencyTable table;
  double statistic = 0.0;
  int df = 0;  // 1 when the block's table is non-degenerate, else 0
};

std::vector<CommunityTestDetail> per_community_chi_squared(const SocialTypeVector& types,
                                                           const CulturalState& traits,
                                                           const Partition& partition);

// Stratified association test: sum of per-block 2x2 statistics, df = number
// of non-degenerate blocks. Reduces exactly to chi_squared under the
// single-block partition; df = 0 leaves p undefined.
ChiSquaredResult conditional_chi_squared(const SocialTypeVector& types, const CulturalState& traits,
                                         const Partition& partition);

struct PermutationTestResult {
  double observed = 0.0;
  int permutations = 0;
  int exceed_count = 0;  // permuted statistics >= observed
  double p_value = 1.0;  // (exceed_count + 1) / (permutations + 1)
};

// Permutation null: trait labels are shuffled uniformly within each block,
// independently across blocks, preserving per-block trait counts and all
// type labels. Deterministic given the stream; permutation i draws from a
// substream indexed by i, so the result does not depend on evaluation order.
PermutationTestResult permutation_test_conditional(const SocialTypeVector& types,
                                                   const CulturalState& traits,
                                                   const Partition& partition, int permutations,
                                                   RngStream& rng);

}  // namespace netdrift
