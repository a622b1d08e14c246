#include "netdrift/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "netdrift/io.hpp"
#include "netdrift/mixing.hpp"
#include "netdrift/rng.hpp"
#include "netdrift/version.hpp"

namespace netdrift {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream indices within one replicate's seed.
enum : std::uint64_t {
  kGraphStream = 0,
  kDynamicsStream = 1,
  kConditionalPermStream = 2,
  kUnconditionalPermStream = 3,
};

// Stream index of the shared graph in fixed-graph mode; replicate indices
// stay far below this.
constexpr std::uint64_t kFixedGraphStream = ~std::uint64_t{0};

std::string type_assignment_name(TypeAssignment t) {
  return t == TypeAssignment::kExactHalfSplit ? "exact-half-split" : "uniform-random";
}

TypeAssignment type_assignment_from(const std::string& name) {
  if (name == "exact-half-split") return TypeAssignment::kExactHalfSplit;
  if (name == "uniform-random") return TypeAssignment::kUniformRandom;
  throw std::invalid_argument("config: unknown type_assignment '" + name + "'");
}

std::string connectivity_name(ConnectivityPolicy c) {
  return c == ConnectivityPolicy::kResampleUntilConnected ? "resample-until-connected"
                                                          : "allow-disconnected";
}

ConnectivityPolicy connectivity_from(const std::string& name) {
  if (name == "resample-until-connected") return ConnectivityPolicy::kResampleUntilConnected;
  if (name == "allow-disconnected") return ConnectivityPolicy::kAllowDisconnected;
  throw std::invalid_argument("config: unknown connectivity '" + name + "'");
}

std::string graph_mode_name(GraphMode m) {
  return m == GraphMode::kFixedGraph ? "fixed-graph" : "resample-per-replicate";
}

GraphMode graph_mode_from(const std::string& name) {
  if (name == "fixed-graph") return GraphMode::kFixedGraph;
  if (name == "resample-per-replicate") return GraphMode::kResamplePerReplicate;
  throw std::invalid_argument("config: unknown graph_mode '" + name + "'");
}

json stepper_to_json(const StepperSpec& stepper) {
  if (stepper.kind == StepperSpec::Kind::kNeutral) return json{{"kind", "neutral"}};
  return json{{"kind", "biased"},
              {"beta", {{stepper.beta.accept[0][0], stepper.beta.accept[0][1]},
                        {stepper.beta.accept[1][0], stepper.beta.accept[1][1]}}}};
}

StepperSpec stepper_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "neutral") return StepperSpec::neutral();
  if (kind != "biased") throw std::invalid_argument("config: unknown stepper kind '" + kind + "'");
  BiasMatrix beta;
  if (j.contains("beta")) {
    const auto& b = j.at("beta");
    for (int t = 0; t < 2; ++t)
      for (int y = 0; y < 2; ++y) beta.accept[t][y] = b.at(t).at(y).get<double>();
  }
  beta.validate();
  return StepperSpec::biased(beta);
}

json config_to_json(const ExperimentConfig& c) {
  return json{
      {"generator",
       {{"n", c.generator.n},
        {"p_within", c.generator.p_within},
        {"p_between", c.generator.p_between},
        {"type_assignment", type_assignment_name(c.generator.type_assignment)},
        {"connectivity", connectivity_name(c.generator.connectivity)},
        {"max_attempts", c.generator.max_attempts}}},
      {"graph_mode", graph_mode_name(c.graph_mode)},
      {"stepper", stepper_to_json(c.stepper)},
      {"replicates", c.replicates},
      {"budget", c.effective_budget()},
      {"record_every", c.effective_record_every()},
      {"alpha", c.alpha},
      {"permutations", c.permutations},
      {"master_seed", c.master_seed},
      {"flat_p", c.flat_p},
      {"output", c.output_prefix},
      {"format", c.format},
  };
}

json meta_json(const ExperimentConfig& c) {
  return json{{"version", kVersion}, {"config", config_to_json(c)}};
}

// Per-replicate chi-squared on the recording grid; absorbed trajectories
// continue at 0 (homogeneous states have zero association).
std::vector<double> chi2_on_grid(const TrajectoryRecord& rec, long long record_every,
                                 long long budget) {
  const std::size_t grid_points = static_cast<std::size_t>(budget / record_every) + 1;
  std::vector<double> out;
  out.reserve(grid_points);
  std::size_t si = 0;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const long long step = static_cast<long long>(k) * record_every;
    while (si < rec.samples.size() && rec.samples[si].step < step) ++si;
    if (si < rec.samples.size() && rec.samples[si].step == step) {
      out.push_back(rec.samples[si].chi2);
    } else {
      out.push_back(0.0);
    }
  }
  return out;
}

// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return kNaN;
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double assortativity_or_nan(const Graph& g, const SocialTypeVector& types) {
  if (g.edge_count() == 0) return kNaN;
  return mixing_summary(g, types).r;
}

struct PeakSample {
  std::size_t index = 0;
  double chi2 = 0.0;
  long long step = 0;
};

// Earliest maximum-chi2 sample; absorbed samples are not candidates when
// require_unabsorbed is set.
std::optional<PeakSample> find_peak(const TrajectoryRecord& rec, bool require_unabsorbed) {
  std::optional<PeakSample> best;
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const auto& sample = rec.samples[i];
    if (require_unabsorbed && sample.absorbed) continue;
    if (!best || sample.chi2 > best->chi2) best = PeakSample{i, sample.chi2, sample.step};
  }
  return best;
}

json chi_squared_to_json(const ChiSquaredResult& r) {
  json j{{"statistic", r.statistic}, {"df", r.df}, {"degenerate", r.degenerate}};
  if (r.p_defined)
    j["p_asymptotic"] = r.p_asymptotic;
  else
    j["p_asymptotic"] = nullptr;
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  generator.validate();
  if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
  if (effective_budget() < 1) throw std::invalid_argument("config: budget must be >= 1");
  if (effective_record_every() < 1)
    throw std::invalid_argument("config: record_every must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("config: alpha must lie in (0, 1]");
  if (permutations < 1) throw std::invalid_argument("config: permutations must be >= 1");
  if (!(flat_p >= 0.0 && flat_p <= 1.0))
    throw std::invalid_argument("config: flat_p outside [0,1]");
  if (format != "csv" && format != "json")
    throw std::invalid_argument("config: format must be csv or json");
  if (stepper.kind == StepperSpec::Kind::kBiased) stepper.beta.validate();
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    if (g.contains("n")) c.generator.n = g.at("n").get<int>();
    if (g.contains("p_within")) c.generator.p_within = g.at("p_within").get<double>();
    if (g.contains("p_between")) c.generator.p_between = g.at("p_between").get<double>();
    if (g.contains("type_assignment"))
      c.generator.type_assignment = type_assignment_from(g.at("type_assignment").get<std::string>());
    if (g.contains("connectivity"))
      c.generator.connectivity = connectivity_from(g.at("connectivity").get<std::string>());
    if (g.contains("max_attempts")) c.generator.max_attempts = g.at("max_attempts").get<int>();
  }
  if (j.contains("graph_mode")) c.graph_mode = graph_mode_from(j.at("graph_mode").get<std::string>());
  if (j.contains("stepper")) c.stepper = stepper_from_json(j.at("stepper"));
  if (j.contains("replicates")) c.replicates = j.at("replicates").get<int>();
  if (j.contains("budget")) c.budget = j.at("budget").get<long long>();
  if (j.contains("record_every")) c.record_every = j.at("record_every").get<long long>();
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("permutations")) c.permutations = j.at("permutations").get<int>();
  if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("flat_p")) c.flat_p = j.at("flat_p").get<double>();
  if (j.contains("output")) c.output_prefix = j.at("output").get<std::string>();
  if (j.contains("format")) c.format = j.at("format").get<std::string>();
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  return config_from_json_text(read_text_file(path));
}

std::string config_to_json_text(const ExperimentConfig& config) {
  return config_to_json(config).dump();
}

Fig1Result run_fig1(const ExperimentConfig& config) {
  config.validate();
  const long long budget = config.effective_budget();
  const long long record_every = config.effective_record_every();

  Fig1Result result;
  const char* arm_names[2] = {"assortative", "flat"};
  for (int arm = 0; arm < 2; ++arm) {
    GeneratorParams gen = config.generator;
    if (arm == 1) {
      gen.p_within = config.flat_p;
      gen.p_between = config.flat_p;
    }
    const std::uint64_t arm_seed = derive_stream_seed(config.master_seed, arm);

    std::optional<std::pair<Graph, SocialTypeVector>> fixed;
    if (config.graph_mode == GraphMode::kFixedGraph) {
      GeneratorParams fixed_gen = gen;
      fixed_gen.seed = derive_stream_seed(arm_seed, kFixedGraphStream);
      fixed = generate_planted_partition(fixed_gen);
    }

    std::vector<std::vector<double>> grids;
    grids.reserve(config.replicates);
    for (int rep = 0; rep < config.replicates; ++rep) {
      const std::uint64_t rep_seed = derive_stream_seed(arm_seed, rep);
      std::optional<std::pair<Graph, SocialTypeVector>> local;
      if (!fixed) {
        GeneratorParams rep_gen = gen;
        rep_gen.seed = derive_stream_seed(rep_seed, kGraphStream);
        local = generate_planted_partition(rep_gen);
      }
      const Graph& graph = fixed ? fixed->first : local->first;
      const SocialTypeVector& types = fixed ? fixed->second : local->second;

      RngStream dyn_rng(derive_stream_seed(rep_seed, kDynamicsStream));
      CulturalState s0 = init_uniform_traits(gen.n, dyn_rng);
      const TrajectoryRecord rec =
          run(graph, types, std::move(s0), config.stepper,
              RunOptions{budget, record_every, true, false}, dyn_rng);

      ReplicateSummary summary;
      summary.replicate = rep;
      summary.assortativity_r = assortativity_or_nan(graph, types);
      const auto peak = find_peak(rec, false);
      summary.peak_chi2 = peak->chi2;
      summary.peak_step = peak->step;
      summary.final_chi2 = rec.samples.back().chi2;
      summary.absorbed = rec.absorbed;
      summary.absorption_step = rec.absorption_step;
      result.replicates.emplace_back(arm_names[arm], summary);

      grids.push_back(chi2_on_grid(rec, record_every, budget));
    }

    const std::size_t grid_points = grids.front().size();
    std::vector<double> column(config.replicates);
    for (std::size_t k = 0; k < grid_points; ++k) {
      for (int rep = 0; rep < config.replicates; ++rep) column[rep] = grids[rep][k];
      std::sort(column.begin(), column.end());
      Fig1SummaryRow row;
      row.arm = arm_names[arm];
      row.step = static_cast<long long>(k) * record_every;
      row.sweep = static_cast<double>(row.step) / gen.n;
      row.chi2_q25 = quantile_sorted(column, 0.25);
      row.chi2_median = quantile_sorted(column, 0.5);
      row.chi2_q75 = quantile_sorted(column, 0.75);
      row.trace_chi2 = grids.front()[k];
      result.summary.push_back(std::move(row));
    }
  }
  return result;
}

std::vector<std::string> write_fig1_outputs(const Fig1Result& result,
                                            const ExperimentConfig& config) {
  const json meta = meta_json(config);
  std::vector<std::string> written;
  if (config.format == "json") {
    json doc{{"meta", meta}};
    doc["summary"] = json::array();
    for (const auto& row : result.summary) {
      doc["summary"].push_back({{"arm", row.arm},
                                {"step", row.step},
                                {"sweep", row.sweep},
                                {"chi2_q25", row.chi2_q25},
                                {"chi2_median", row.chi2_median},
                                {"chi2_q75", row.chi2_q75},
                                {"trace_chi2", row.trace_chi2}});
    }
    doc["replicates"] = json::array();
    for (const auto& [arm, rep] : result.replicates) {
      doc["replicates"].push_back(
          {{"arm", arm},
           {"replicate", rep.replicate},
           {"assortativity_r", std::isnan(rep.assortativity_r) ? json(nullptr) : json(rep.assortativity_r)},
           {"peak_chi2", rep.peak_chi2},
           {"peak_step", rep.peak_step},
           {"final_chi2", rep.final_chi2},
           {"absorbed", rep.absorbed},
           {"absorption_step", rep.absorption_step}});
    }
    const std::string path = config.output_prefix + "_fig1.json";
    write_text_file(path, doc.dump(2) + "\n");
    written.push_back(path);
    return written;
  }

  std::string summary_text = "# netdrift " + std::string(kVersion) + "\n# config " + meta.at("config").dump() + "\n";
  summary_text += "arm,step,sweep,chi2_q25,chi2_median,chi2_q75,trace_chi2\n";
  for (const auto& row : result.summary) {
    summary_text += row.arm + ',' + std::to_string(row.step) + ',' + format_double(row.sweep) +
                    ',' + format_double(row.chi2_q25) + ',' + format_double(row.chi2_median) +
                    ',' + format_double(row.chi2_q75) + ',' + format_double(row.trace_chi2) + '\n';
  }
  const std::string summary_path = config.output_prefix + "_summary.csv";
  write_text_file(summary_path, summary_text);
  written.push_back(summary_path);

  std::string reps_text = "# netdrift " + std::string(kVersion) + "\n# config " + meta.at("config").dump() + "\n";
  reps_text += "arm,replicate,assortativity_r,peak_chi2,peak_step,final_chi2,absorbed,absorption_step\n";
  for (const auto& [arm, rep] : result.replicates) {
    reps_text += arm + ',' + std::to_string(rep.replicate) + ',' +
                 format_double(rep.assortativity_r) + ',' + format_double(rep.peak_chi2) + ',' +
                 std::to_string(rep.peak_step) + ',' + format_double(rep.final_chi2) + ',' +
                 (rep.absorbed ? "1" : "0") + ',' + std::to_string(rep.absorption_step) + '\n';
  }
  const std::string reps_path = config.output_prefix + "_replicates.csv";
  write_text_file(reps_path, reps_text);
  written.push_back(reps_path);
  return written;
}

CiContrastResult run_ci_contrast(const ExperimentConfig& config) {
  config.validate();
  const long long budget = config.effective_budget();
  const long long record_every = config.effective_record_every();
  const int n = config.generator.n;

  CiContrastResult result;
  result.replicates = config.replicates;

  std::optional<std::pair<Graph, SocialTypeVector>> fixed;
  std::optional<Partition> fixed_partition;
  if (config.graph_mode == GraphMode::kFixedGraph) {
    GeneratorParams fixed_gen = config.generator;
    fixed_gen.seed = derive_stream_seed(config.master_seed, kFixedGraphStream);
    fixed = generate_planted_partition(fixed_gen);
    fixed_partition = girvan_newman(fixed->first).best_partition;
  }

  int rejected_unconditional = 0;
  int rejected_conditional = 0;
  for (int rep = 0; rep < config.replicates; ++rep) {
    const std::uint64_t rep_seed = derive_stream_seed(config.master_seed, rep);

    std::optional<std::pair<Graph, SocialTypeVector>> local;
    if (!fixed) {
      GeneratorParams rep_gen = config.generator;
      rep_gen.seed = derive_stream_seed(rep_seed, kGraphStream);
      local = generate_planted_partition(rep_gen);
    }
    const Graph& graph = fixed ? fixed->first : local->first;
    const SocialTypeVector& types = fixed ? fixed->second : local->second;

    CiReplicateReport report;
    report.replicate = rep;
    report.assortativity_r = assortativity_or_nan(graph, types);

    RngStream dyn_rng(derive_stream_seed(rep_seed, kDynamicsStream));
    CulturalState s0 = init_uniform_traits(n, dyn_rng);
    const TrajectoryRecord rec = run(graph, types, std::move(s0), config.stepper,
                                     RunOptions{budget, record_every, true, true}, dyn_rng);
    report.absorbed = rec.absorbed;
    report.absorption_step = rec.absorption_step;

    const auto peak = find_peak(rec, true);
    if (!peak) {
      report.excluded = true;
      result.excluded += 1;
      result.reports.push_back(std::move(report));
      continue;
    }
    report.tested_step = peak->step;
    report.tested_chi2 = peak->chi2;
    const CulturalState& state = rec.states[peak->index];

    const Partition partition =
        fixed_partition ? *fixed_partition : girvan_newman(graph).best_partition;
    report.community_count = partition.block_count();
    report.partition_modularity =
        graph.edge_count() == 0 ? kNaN : modularity(graph, partition);

    report.conditional = conditional_chi_squared(types, state, partition);
    RngStream cond_rng(derive_stream_seed(rep_seed, kConditionalPermStream));
    report.conditional_perm =
        permutation_test_conditional(types, state, partition, config.permutations, cond_rng);
    report.per_community = per_community_chi_squared(types, state, partition);

    const Partition everyone = Partition::single_block(n);
    report.unconditional = conditional_chi_squared(types, state, everyone);
    RngStream uncond_rng(derive_stream_seed(rep_seed, kUnconditionalPermStream));
    report.unconditional_perm =
        permutation_test_conditional(types, state, everyone, config.permutations, uncond_rng);

    if (report.unconditional_perm.p_value <= config.alpha) ++rejected_unconditional;
    if (report.conditional_perm.p_value <= config.alpha) ++rejected_conditional;
    result.reports.push_back(std::move(report));
  }

  const int included = result.replicates - result.excluded;
  result.unconditional_rejection_rate =
      included > 0 ? static_cast<double>(rejected_unconditional) / included : kNaN;
  result.conditional_rejection_rate =
      included > 0 ? static_cast<double>(rejected_conditional) / included : kNaN;
  return result;
}

std::vector<std::string> write_ci_contrast_outputs(const CiContrastResult& result,
                                                   const ExperimentConfig& config) {
  const json meta = meta_json(config);
  std::vector<std::string> written;

  if (config.format == "csv") {
    std::string text = "# netdrift " + std::string(kVersion) + "\n# config " + meta.at("config").dump() + "\n";
    text += "replicate,excluded,assortativity_r,tested_step,tested_chi2,communities,modularity,"
            "uncond_statistic,uncond_p_perm,cond_statistic,cond_df,cond_p_perm\n";
    for (const auto& r : result.reports) {
      text += std::to_string(r.replicate) + ',' + (r.excluded ? "1" : "0") + ',' +
              format_double(r.assortativity_r) + ',' + std::to_string(r.tested_step) + ',' +
              format_double(r.tested_chi2) + ',' + std::to_string(r.community_count) + ',' +
              format_double(r.partition_modularity) + ',' + format_double(r.unconditional.statistic) +
              ',' + format_double(r.unconditional_perm.p_value) + ',' +
              format_double(r.conditional.statistic) + ',' + std::to_string(r.conditional.df) +
              ',' + format_double(r.conditional_perm.p_value) + '\n';
    }
    const std::string path = config.output_prefix + "_ci_report.csv";
    write_text_file(path, text);
    written.push_back(path);
    return written;
  }

  json doc{{"meta", meta},
           {"alpha", config.alpha},
           {"permutations", config.permutations},
           {"replicates", result.replicates},
           {"excluded", result.excluded}};
  doc["unconditional_rejection_rate"] = std::isnan(result.unconditional_rejection_rate)
                                            ? json(nullptr)
                                            : json(result.unconditional_rejection_rate);
  doc["conditional_rejection_rate"] = std::isnan(result.conditional_rejection_rate)
                                          ? json(nullptr)
                                          : json(result.conditional_rejection_rate);
  doc["replicates_detail"] = json::array();
  for (const auto& r : result.reports) {
    json jr{{"replicate", r.replicate},
            {"excluded", r.excluded},
            {"assortativity_r", std::isnan(r.assortativity_r) ? json(nullptr) : json(r.assortativity_r)},
            {"absorbed", r.absorbed},
            {"absorption_step", r.absorption_step}};
    if (!r.excluded) {
      jr["tested_step"] = r.tested_step;
      jr["tested_chi2"] = r.tested_chi2;
      jr["communities"] = r.community_count;
      jr["modularity"] = std::isnan(r.partition_modularity) ? json(nullptr) : json(r.partition_modularity);
      jr["unconditional"] = chi_squared_to_json(r.unconditional);
      jr["unconditional"]["p_permutation"] = r.unconditional_perm.p_value;
      jr["conditional"] = chi_squared_to_json(r.conditional);
      jr["conditional"]["p_permutation"] = r.conditional_perm.p_value;
      json per_community = json::array();
      for (const auto& d : r.per_community) {
        per_community.push_back({{"community_id", d.community_id},
                                 {"size", d.size},
                                 {"table",
                                  {{d.table.counts[0][0], d.table.counts[0][1]},
                                   {d.table.counts[1][0], d.table.counts[1][1]}}},
                                 {"statistic", d.statistic},
                                 {"df", d.df}});
      }
      jr["conditional"]["per_community"] = std::move(per_community);
    }
    doc["replicates_detail"].push_back(std::move(jr));
  }
  const std::string path = config.output_prefix + "_ci_report.json";
  write_text_file(path, doc.dump(2) + "\n");
  written.push_back(path);
  return written;
}

}  // namespace netdrift
