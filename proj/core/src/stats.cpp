#include "netdrift/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace netdrift {

namespace {

void check_lengths(const SocialTypeVector& types, const CulturalState& traits) {
  if (types.size() != traits.size())
    throw std::invalid_argument("contingency: type and trait vectors differ in length");
}

// Regularized upper incomplete gamma Q(a, x): series for the lower part when
// x < a + 1, modified-Lentz continued fraction otherwise.
double regularized_gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(log_prefactor);
  }
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_prefactor) * h;
}

}  // namespace

ContingencyTable contingency_from_state(const SocialTypeVector& types, const CulturalState& traits) {
  check_lengths(types, traits);
  ContingencyTable t;
  for (std::size_t v = 0; v < types.size(); ++v) t.counts[types[v]][traits[v]] += 1;
  return t;
}

ContingencyTable contingency_from_state(const SocialTypeVector& types, const CulturalState& traits,
                                        const std::vector<int>& subset) {
  check_lengths(types, traits);
  ContingencyTable t;
  for (int v : subset) {
    if (v < 0 || v >= static_cast<int>(types.size()))
      throw std::invalid_argument("contingency: subset node out of range");
    t.counts[types[v]][traits[v]] += 1;
  }
  return t;
}

ChiSquaredResult chi_squared(const ContingencyTable& t) {
  const double a = static_cast<double>(t.counts[0][0]);
  const double b = static_cast<double>(t.counts[0][1]);
  const double c = static_cast<double>(t.counts[1][0]);
  const double d = static_cast<double>(t.counts[1][1]);
  const double n = a + b + c + d;
  const double row0 = a + b, row1 = c + d, col0 = a + c, col1 = b + d;

  ChiSquaredResult res;
  if (n == 0.0 || row0 == 0.0 || row1 == 0.0 || col0 == 0.0 || col1 == 0.0) {
    res.degenerate = true;
    return res;
  }
  const double diff = a * d - b * c;
  res.statistic = n * diff * diff / (row0 * row1 * col0 * col1);
  res.df = 1;
  res.p_asymptotic = chi_squared_survival(res.statistic, 1);
  res.p_defined = true;
  return res;
}

double chi_squared_survival(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi_squared_survival: df must be >= 1");
  if (!(x >= 0.0)) throw std::invalid_argument("chi_squared_survival: x must be >= 0");
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

std::vector<CommunityTestDetail> per_community_chi_squared(const SocialTypeVector& types,
                                                           const CulturalState& traits,
                                                           const Partition& partition) {
  check_lengths(types, traits);
  if (partition.node_count() != static_cast<int>(types.size()))
    throw std::invalid_argument("conditional test: partition does not cover the nodes");

  std::vector<CommunityTestDetail> details;
  details.reserve(partition.blocks.size());
  for (int b = 0; b < partition.block_count(); ++b) {
    CommunityTestDetail detail;
    detail.community_id = b;
    detail.size = static_cast<int>(partition.blocks[b].size());
    detail.table = contingency_from_state(types, traits, partition.blocks[b]);
    const ChiSquaredResult block = chi_squared(detail.table);
    detail.statistic = block.statistic;
    detail.df = block.df;
    details.push_back(detail);
  }
  return details;
}

ChiSquaredResult conditional_chi_squared(const SocialTypeVector& types, const CulturalState& traits,
                                         const Partition& partition) {
  ChiSquaredResult res;
  for (const auto& detail : per_community_chi_squared(types, traits, partition)) {
    res.statistic += detail.statistic;
    res.df += detail.df;
  }
  if (res.df == 0) {
    res.degenerate = true;
    res.statistic = 0.0;
    return res;
  }
  res.p_asymptotic = chi_squared_survival(res.statistic, res.df);
  res.p_defined = true;
  return res;
}

PermutationTestResult permutation_test_conditional(const SocialTypeVector& types,
                                                   const CulturalState& traits,
                                                   const Partition& partition, int permutations,
                                                   RngStream& rng) {
  if (permutations < 1)
    throw std::invalid_argument("permutation test: permutation count must be >= 1");

  PermutationTestResult res;
  res.permutations = permutations;
  res.observed = conditional_chi_squared(types, traits, partition).statistic;

  // Substream per permutation so the count can change without reshuffling
  // earlier draws and permutations can be evaluated in any order.
  const std::uint64_t base = rng.next_u64();
  CulturalState work = traits;
  std::vector<std::uint8_t> pool;
  for (int i = 0; i < permutations; ++i) {
    RngStream perm_rng = RngStream::substream(base, static_cast<std::uint64_t>(i));
    for (const auto& block : partition.blocks) {
      pool.clear();
      for (int v : block) pool.push_back(work[v]);
      perm_rng.shuffle(pool);
      for (std::size_t k = 0; k < block.size(); ++k) work[block[k]] = pool[k];
    }
    const double stat = conditional_chi_squared(types, work, partition).statistic;
    if (stat >= res.observed) res.exceed_count += 1;
  }
  res.p_value = (res.exceed_count + 1.0) / (permutations + 1.0);
  return res;
}

}  // namespace netdrift
