#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netdrift/community.hpp"
#include "netdrift/dynamics.hpp"
#include "netdrift/generator.hpp"
#include "netdrift/stats.hpp"

namespace netdrift {

enum class GraphMode {
  kFixedGraph,            // one graph shared by every replicate
  kResamplePerReplicate,  // each replicate draws a fresh graph
};

struct ExperimentConfig {
  GeneratorParams generator;
  GraphMode graph_mode = GraphMode::kResamplePerReplicate;
  StepperSpec stepper;
  int replicates = 200;
  long long budget = 0;        // 0: defaults to 200 sweeps (200 * n steps)
  long long record_every = 0;  // 0: defaults to one sweep (n steps)
  double alpha = 0.05;         // significance level, in (0, 1]
  int permutations = 1000;
  std::uint64_t master_seed = 0;
  double flat_p = 0.05;  // edge probability of the non-assortative arm
  std::string output_prefix = "netdrift";
  std::string format = "csv";  // "csv" or "json"

  long long effective_budget() const { return budget > 0 ? budget : 200LL * generator.n; }
  long long effective_record_every() const { return record_every > 0 ? record_every : generator.n; }
  void validate() const;  // throws std::invalid_argument
};

// JSON config round-trip; the file schema mirrors the struct field for field.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& config);

struct ReplicateSummary {
  int replicate = 0;
  double assortativity_r = 0.0;  // NaN when undefined
  double peak_chi2 = 0.0;
  long long peak_step = 0;  // earliest step attaining the peak
  double final_chi2 = 0.0;
  bool absorbed = false;
  long long absorption_step = -1;
};

struct Fig1SummaryRow {
  std::string arm;  // "assortative" or "flat"
  long long step = 0;
  double sweep = 0.0;
  double chi2_q25 = 0.0;
  double chi2_median = 0.0;
  double chi2_q75 = 0.0;
  double trace_chi2 = 0.0;  // replicate 0, as a representative single run
};

struct Fig1Result {
  std::vector<Fig1SummaryRow> summary;  // assortative rows first, then flat
  std::vector<std::pair<std::string, ReplicateSummary>> replicates;  // (arm, summary)
};

// Runs the configured replicates for both parameter settings: the configured
// generator ("assortative" arm) and p_within = p_between = flat_p ("flat"
// arm). Cross-replicate chi-squared quantiles are reported on the recording
// grid, with absorbed trajectories continued at 0. Deterministic given
// master_seed.
Fig1Result run_fig1(const ExperimentConfig& config);

// Writes <prefix>_summary and <prefix>_replicates in the configured format;
// returns the paths written.
std::vector<std::string> write_fig1_outputs(const Fig1Result& result,
                                            const ExperimentConfig& config);

struct CiReplicateReport {
  int replicate = 0;
  bool excluded = false;  // absorbed before any testable sample
  double assortativity_r = 0.0;
  long long tested_step = -1;  // step of the chi-squared peak
  double tested_chi2 = 0.0;
  bool absorbed = false;
  long long absorption_step = -1;
  int community_count = 0;
  double partition_modularity = 0.0;
  ChiSquaredResult unconditional;
  PermutationTestResult unconditional_perm;
  ChiSquaredResult conditional;
  PermutationTestResult conditional_perm;
  std::vector<CommunityTestDetail> per_community;
};

struct CiContrastResult {
  int replicates = 0;
  int excluded = 0;
  // Fractions of included replicates with permutation p <= alpha.
  double unconditional_rejection_rate = 0.0;
  double conditional_rejection_rate = 0.0;
  std::vector<CiReplicateReport> reports;
};

// Per replicate: simulate to the budget (stopping at absorption), pick the
// non-absorbed sample where chi-squared peaks, detect communities with
// girvan_newman, and run the unconditional and community-conditional
// permutation tests on that snapshot. Replicates with no testable sample are
// excluded and counted.
CiContrastResult run_ci_contrast(const ExperimentConfig& config);

// Writes <prefix>_ci_report.json (or .csv summary per format); returns paths.
std::vector<std::string> write_ci_contrast_outputs(const CiContrastResult& result,
                                                   const ExperimentConfig& config);

}  // namespace netdrift
