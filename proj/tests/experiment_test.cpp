#include "netdrift/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "netdrift/io.hpp"

namespace netdrift {
namespace {

namespace fs = std::filesystem;

std::string temp_prefix(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "netdrift_experiment_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.generator.n = 30;
  cfg.generator.p_within = 0.20;
  cfg.generator.p_between = 0.04;
  cfg.flat_p = 0.2;  // the default 0.05 cannot connect a 30-node graph
  cfg.replicates = 6;
  cfg.budget = 600;
  cfg.record_every = 60;
  cfg.permutations = 60;
  cfg.master_seed = 5;
  cfg.format = "csv";
  return cfg;
}

TEST(Config, ValidatesFields) {
  ExperimentConfig cfg = small_config();
  cfg.replicates = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.alpha = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.alpha = 1.0;  // degenerate limit is allowed
  EXPECT_NO_THROW(cfg.validate());
  cfg = small_config();
  cfg.format = "xml";
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig cfg = small_config();
  cfg.stepper = StepperSpec::biased([] {
    BiasMatrix b;
    b.accept[0][1] = 0.25;
    b.accept[1][0] = 0.5;
    return b;
  }());
  cfg.graph_mode = GraphMode::kFixedGraph;
  cfg.generator.type_assignment = TypeAssignment::kUniformRandom;
  cfg.generator.connectivity = ConnectivityPolicy::kAllowDisconnected;
  const ExperimentConfig back = config_from_json_text(config_to_json_text(cfg));
  EXPECT_EQ(back.generator.n, cfg.generator.n);
  EXPECT_EQ(back.generator.type_assignment, cfg.generator.type_assignment);
  EXPECT_EQ(back.generator.connectivity, cfg.generator.connectivity);
  EXPECT_EQ(back.graph_mode, cfg.graph_mode);
  EXPECT_EQ(back.stepper.kind, StepperSpec::Kind::kBiased);
  EXPECT_DOUBLE_EQ(back.stepper.beta.accept[0][1], 0.25);
  EXPECT_EQ(back.replicates, cfg.replicates);
  EXPECT_EQ(back.budget, cfg.budget);
  EXPECT_EQ(back.master_seed, cfg.master_seed);
}

TEST(Config, RejectsMalformedJson) {
  EXPECT_THROW(config_from_json_text("{not json"), std::invalid_argument);
  EXPECT_THROW(config_from_json_text("{\"stepper\":{\"kind\":\"quantum\"}}"),
               std::invalid_argument);
}

TEST(Fig1, ProducesBothArmsOnTheFullGrid) {
  const ExperimentConfig cfg = small_config();
  const Fig1Result result = run_fig1(cfg);
  const std::size_t grid_points = static_cast<std::size_t>(cfg.budget / cfg.record_every) + 1;
  EXPECT_EQ(result.summary.size(), 2 * grid_points);
  EXPECT_EQ(result.replicates.size(), 2u * cfg.replicates);
  std::set<std::string> arms;
  for (const auto& row : result.summary) {
    arms.insert(row.arm);
    EXPECT_GE(row.chi2_median, row.chi2_q25 - 1e-12);
    EXPECT_GE(row.chi2_q75, row.chi2_median - 1e-12);
    EXPECT_GE(row.chi2_q25, 0.0);
    // traits are initialized independently of types, so the step-0 spread
    // stays well under the df=1 critical value
    if (row.step == 0) EXPECT_LT(row.chi2_median, 3.84);
  }
  EXPECT_EQ(arms, (std::set<std::string>{"assortative", "flat"}));
  for (const auto& [arm, rep] : result.replicates) {
    (void)arm;
    EXPECT_GE(rep.peak_chi2, 0.0);
    if (rep.absorbed) {
      EXPECT_LE(rep.absorption_step, cfg.budget);
      EXPECT_DOUBLE_EQ(rep.final_chi2, 0.0);
    }
  }
}

TEST(Fig1, DeterministicIncludingWrittenBytes) {
  ExperimentConfig cfg = small_config();
  cfg.output_prefix = temp_prefix("det_a");
  const Fig1Result r1 = run_fig1(cfg);
  const auto paths_a = write_fig1_outputs(r1, cfg);
  const ExperimentConfig cfg_b = [&] {
    ExperimentConfig c = cfg;
    c.output_prefix = temp_prefix("det_b");
    return c;
  }();
  const Fig1Result r2 = run_fig1(cfg_b);
  const auto paths_b = write_fig1_outputs(r2, cfg_b);
  ASSERT_EQ(paths_a.size(), paths_b.size());
  for (std::size_t i = 0; i < paths_a.size(); ++i) {
    std::string a = read_text_file(paths_a[i]);
    std::string b = read_text_file(paths_b[i]);
    // the config echo embeds the differing output prefix; normalize it away
    const auto scrub = [](std::string text, const std::string& prefix) {
      std::size_t pos;
      while ((pos = text.find(prefix)) != std::string::npos) text.erase(pos, prefix.size());
      return text;
    };
    EXPECT_EQ(scrub(a, cfg.output_prefix), scrub(b, cfg_b.output_prefix));
  }
}

TEST(Fig1, ReplicateResultsAreIndexAddressed) {
  // adding replicates must not change the results of earlier ones
  ExperimentConfig small = small_config();
  ExperimentConfig large = small_config();
  large.replicates = small.replicates + 4;
  const Fig1Result a = run_fig1(small);
  const Fig1Result b = run_fig1(large);
  for (int rep = 0; rep < small.replicates; ++rep) {
    const auto& ra = a.replicates[rep].second;  // assortative arm block comes first
    const auto& rb = b.replicates[rep].second;
    EXPECT_DOUBLE_EQ(ra.peak_chi2, rb.peak_chi2);
    EXPECT_EQ(ra.peak_step, rb.peak_step);
    EXPECT_DOUBLE_EQ(ra.assortativity_r, rb.assortativity_r);
  }
}

TEST(Fig1, FixedGraphModeSharesTheGraph) {
  ExperimentConfig cfg = small_config();
  cfg.graph_mode = GraphMode::kFixedGraph;
  const Fig1Result result = run_fig1(cfg);
  double first_r = result.replicates.front().second.assortativity_r;
  for (int rep = 0; rep < cfg.replicates; ++rep) {
    EXPECT_DOUBLE_EQ(result.replicates[rep].second.assortativity_r, first_r);
  }
}

TEST(CiContrast, SmokeRunWithReports) {
  ExperimentConfig cfg = small_config();
  cfg.permutations = 99;
  const CiContrastResult result = run_ci_contrast(cfg);
  EXPECT_EQ(result.replicates, cfg.replicates);
  EXPECT_EQ(result.reports.size(), static_cast<std::size_t>(cfg.replicates));
  int excluded = 0;
  for (const auto& r : result.reports) {
    if (r.excluded) {
      ++excluded;
      continue;
    }
    EXPECT_GE(r.tested_chi2, 0.0);
    EXPECT_GE(r.community_count, 1);
    EXPECT_EQ(r.unconditional.df <= 1, true);
    EXPECT_GT(r.unconditional_perm.p_value, 0.0);
    EXPECT_LE(r.unconditional_perm.p_value, 1.0);
    EXPECT_GT(r.conditional_perm.p_value, 0.0);
    EXPECT_LE(r.conditional_perm.p_value, 1.0);
    EXPECT_EQ(r.unconditional_perm.permutations, cfg.permutations);
    EXPECT_EQ(static_cast<int>(r.per_community.size()), r.community_count);
  }
  EXPECT_EQ(excluded, result.excluded);
}

TEST(CiContrast, AlphaOneRejectsEverythingIncluded) {
  ExperimentConfig cfg = small_config();
  cfg.alpha = 1.0;
  cfg.permutations = 20;
  const CiContrastResult result = run_ci_contrast(cfg);
  if (result.excluded < result.replicates) {
    EXPECT_DOUBLE_EQ(result.unconditional_rejection_rate, 1.0);
    EXPECT_DOUBLE_EQ(result.conditional_rejection_rate, 1.0);
  }
}

TEST(CiContrast, WritesParseableJsonReport) {
  ExperimentConfig cfg = small_config();
  cfg.replicates = 3;
  cfg.permutations = 30;
  cfg.format = "json";
  cfg.output_prefix = temp_prefix("ci");
  const CiContrastResult result = run_ci_contrast(cfg);
  const auto paths = write_ci_contrast_outputs(result, cfg);
  ASSERT_EQ(paths.size(), 1u);
  const std::string text = read_text_file(paths[0]);
  EXPECT_NE(text.find("\"unconditional_rejection_rate\""), std::string::npos);
  EXPECT_NE(text.find("\"per_community\""), std::string::npos);
  EXPECT_NE(text.find("\"meta\""), std::string::npos);
}

}  // namespace
}  // namespace netdrift
