#include "netdrift/cli.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "netdrift/community.hpp"
#include "netdrift/dynamics.hpp"
#include "netdrift/exact.hpp"
#include "netdrift/experiment.hpp"
#include "netdrift/generator.hpp"
#include "netdrift/io.hpp"
#include "netdrift/mixing.hpp"
#include "netdrift/rng.hpp"
#include "netdrift/stats.hpp"
#include "netdrift/version.hpp"

namespace netdrift {

namespace {

using nlohmann::json;

json json_or_null(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

TypeAssignment parse_type_assignment(const std::string& name) {
  if (name == "exact-half-split") return TypeAssignment::kExactHalfSplit;
  if (name == "uniform-random") return TypeAssignment::kUniformRandom;
  throw std::invalid_argument("unknown type assignment '" + name + "'");
}

ConnectivityPolicy parse_connectivity(const std::string& name) {
  if (name == "resample-until-connected") return ConnectivityPolicy::kResampleUntilConnected;
  if (name == "allow-disconnected") return ConnectivityPolicy::kAllowDisconnected;
  throw std::invalid_argument("unknown connectivity policy '" + name + "'");
}

StepperSpec make_stepper(const std::string& name, const std::vector<double>& beta_values) {
  if (name == "neutral") return StepperSpec::neutral();
  if (name != "biased") throw std::invalid_argument("unknown stepper '" + name + "'");
  BiasMatrix beta;
  if (!beta_values.empty()) {
    beta.accept[0][0] = beta_values[0];
    beta.accept[0][1] = beta_values[1];
    beta.accept[1][0] = beta_values[2];
    beta.accept[1][1] = beta_values[3];
  }
  beta.validate();
  return StepperSpec::biased(beta);
}

// Graph plus node attributes; n comes from the attribute file.
struct LoadedInstance {
  Graph graph;
  SocialTypeVector types;
  std::optional<CulturalState> traits;
};

LoadedInstance load_instance(const std::string& graph_path, const std::string& attrs_path,
                             const std::string& traits_path) {
  NodeTable table = read_node_table(attrs_path);
  if (!traits_path.empty()) {
    NodeTable trait_table = read_node_table(traits_path);
    if (trait_table.types.size() != table.types.size())
      throw std::runtime_error(traits_path + ": node count differs from " + attrs_path);
    if (!trait_table.traits)
      throw std::runtime_error(traits_path + ": no trait column");
    table.traits = std::move(trait_table.traits);
  }
  Graph g = read_edge_list(graph_path, static_cast<int>(table.types.size()));
  return {std::move(g), std::move(table.types), std::move(table.traits)};
}

struct GenerateArgs {
  GeneratorParams params;
  std::string type_assignment = "exact-half-split";
  std::string connectivity = "resample-until-connected";
  std::string output = "graph";
  std::string format = "csv";
};

int run_generate(const GenerateArgs& args) {
  GeneratorParams params = args.params;
  params.type_assignment = parse_type_assignment(args.type_assignment);
  params.connectivity = parse_connectivity(args.connectivity);
  const auto [graph, types] = generate_planted_partition(params);

  const std::string edges_path = args.output + ".edges";
  const std::string attrs_path = args.output + ".attrs.csv";
  write_edge_list(graph, edges_path);
  write_attributes(types, attrs_path);

  double r = std::numeric_limits<double>::quiet_NaN();
  bool r_defined = false;
  std::array<std::array<double, 2>, 2> e{};
  std::array<double, 2> a{};
  if (graph.edge_count() > 0) {
    const MixingSummary mix = mixing_summary(graph, types);
    r = mix.r;
    r_defined = mix.r_defined;
    e = mix.e;
    a = mix.a;
  }

  std::string mixing_path;
  if (args.format == "json") {
    json doc{{"version", kVersion},
             {"n", params.n},
             {"edges", graph.edge_count()},
             {"p_within", params.p_within},
             {"p_between", params.p_between},
             {"type_assignment", args.type_assignment},
             {"connectivity", args.connectivity},
             {"seed", params.seed},
             {"connected", is_connected(graph)},
             {"r", r_defined ? json(r) : json(nullptr)},
             {"e", {{e[0][0], e[0][1]}, {e[1][0], e[1][1]}}},
             {"a", {a[0], a[1]}}};
    mixing_path = args.output + ".mixing.json";
    write_text_file(mixing_path, doc.dump(2) + "\n");
  } else {
    std::string text = "n,edges,connected,r,e00,e01,e10,e11,a0,a1\n";
    text += std::to_string(params.n) + ',' + std::to_string(graph.edge_count()) + ',' +
            (is_connected(graph) ? "1" : "0") + ',' + format_double(r) + ',' +
            format_double(e[0][0]) + ',' + format_double(e[0][1]) + ',' + format_double(e[1][0]) +
            ',' + format_double(e[1][1]) + ',' + format_double(a[0]) + ',' + format_double(a[1]) +
            '\n';
    mixing_path = args.output + ".mixing.csv";
    write_text_file(mixing_path, text);
  }
  std::cout << "wrote " << edges_path << ", " << attrs_path << ", " << mixing_path << " (edges "
            << graph.edge_count() << ", r " << format_double(r) << ")\n";
  return 0;
}

struct SimulateArgs {
  std::string graph_path;
  std::string attrs_path;
  std::string traits_path;
  std::string stepper = "neutral";
  std::vector<double> beta;
  long long budget = 0;
  long long record_every = 0;
  int replicates = 1;
  bool no_early_stop = false;
  std::string save_state;
  std::uint64_t seed = 0;
  std::string output = "trajectory.csv";
  std::string format = "csv";
};

int run_simulate(const SimulateArgs& args) {
  const LoadedInstance inst = load_instance(args.graph_path, args.attrs_path, args.traits_path);
  const int n = inst.graph.node_count();
  const StepperSpec stepper = make_stepper(args.stepper, args.beta);
  RunOptions opts;
  opts.budget = args.budget > 0 ? args.budget : 200LL * n;
  opts.record_every = args.record_every > 0 ? args.record_every : n;
  opts.stop_on_absorption = !args.no_early_stop;
  if (args.replicates < 1) throw std::invalid_argument("simulate: replicates must be >= 1");

  std::vector<TrajectoryRecord> records;
  records.reserve(args.replicates);
  CulturalState last_state;
  for (int rep = 0; rep < args.replicates; ++rep) {
    RngStream rng = RngStream::substream(args.seed, rep);
    CulturalState s0 = inst.traits ? *inst.traits : init_uniform_traits(n, rng);
    RunOptions rep_opts = opts;
    rep_opts.capture_states = !args.save_state.empty() && rep == args.replicates - 1;
    TrajectoryRecord rec = run(inst.graph, inst.types, std::move(s0), stepper, rep_opts, rng);
    if (rep_opts.capture_states && !rec.states.empty()) last_state = rec.states.back();
    rec.states.clear();
    records.push_back(std::move(rec));
  }

  json meta{{"version", kVersion},
            {"graph", args.graph_path},
            {"attrs", args.attrs_path},
            {"stepper", args.stepper},
            {"budget", opts.budget},
            {"record_every", opts.record_every},
            {"replicates", args.replicates},
            {"early_stop", opts.stop_on_absorption},
            {"seed", args.seed}};
  if (args.format == "json") {
    json doc{{"meta", meta}};
    doc["replicates"] = json::array();
    for (std::size_t rep = 0; rep < records.size(); ++rep) {
      json samples = json::array();
      for (const auto& s : records[rep].samples) {
        samples.push_back({{"step", s.step},
                           {"sweep", static_cast<double>(s.step) / n},
                           {"chi2", s.chi2},
                           {"table",
                            {{s.table.counts[0][0], s.table.counts[0][1]},
                             {s.table.counts[1][0], s.table.counts[1][1]}}},
                           {"absorbed", s.absorbed}});
      }
      doc["replicates"].push_back({{"replicate", rep},
                                   {"absorbed", records[rep].absorbed},
                                   {"absorption_step", records[rep].absorption_step},
                                   {"samples", std::move(samples)}});
    }
    write_text_file(args.output, doc.dump(2) + "\n");
  } else {
    write_trajectories_csv(records, {"netdrift " + std::string(kVersion), "config " + meta.dump()},
                           args.output);
  }
  if (!args.save_state.empty()) {
    if (last_state.empty()) throw std::runtime_error("simulate: no state captured to save");
    write_trait_state(inst.types, last_state, args.save_state);
  }
  std::cout << "wrote " << args.output;
  if (!args.save_state.empty()) std::cout << " and " << args.save_state;
  std::cout << " (" << records.size() << " replicate(s))\n";
  return 0;
}

struct CommunitiesArgs {
  std::string graph_path;
  int nodes = 0;
  std::uint64_t seed = 0;  // accepted for interface uniformity; detection is deterministic
  std::string output;
  std::string format = "csv";
};

int run_communities(const CommunitiesArgs& args) {
  const Graph g = args.nodes > 0 ? read_edge_list(args.graph_path, args.nodes)
                                 : read_edge_list(args.graph_path);
  const GirvanNewmanResult gn = girvan_newman(g);
  const std::string output =
      args.output.empty() ? (args.format == "json" ? "partition.json" : "partition.csv")
                          : args.output;
  if (args.format == "json") {
    json doc{{"version", kVersion},
             {"graph", args.graph_path},
             {"block_count", gn.best_partition.block_count()},
             {"modularity", json_or_null(gn.best_modularity)},
             {"communities", gn.best_partition.blocks}};
    write_text_file(output, doc.dump(2) + "\n");
  } else {
    write_partition(gn.best_partition, output);
  }
  std::cout << "wrote " << output << " (" << gn.best_partition.block_count() << " communities, Q "
            << format_double(gn.best_modularity) << ")\n";
  return 0;
}

struct TestArgs {
  std::string graph_path;
  std::string attrs_path;
  std::string traits_path;
  std::string partition_path;
  bool unconditional = false;
  int permutations = 1000;
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "json";
};

int run_test(const TestArgs& args) {
  const LoadedInstance inst = load_instance(args.graph_path, args.attrs_path, args.traits_path);
  if (!inst.traits)
    throw std::runtime_error("test: no trait column; pass a node,social_type,trait file via "
                             "--attrs or --traits");
  const int n = inst.graph.node_count();

  Partition partition = [&] {
    if (args.unconditional) return Partition::single_block(n);
    if (!args.partition_path.empty()) return read_partition(args.partition_path);
    return girvan_newman(inst.graph).best_partition;
  }();
  if (partition.node_count() != n)
    throw std::runtime_error("test: partition covers " + std::to_string(partition.node_count()) +
                             " nodes, graph has " + std::to_string(n));

  const ChiSquaredResult overall = conditional_chi_squared(inst.types, *inst.traits, partition);
  RngStream rng(args.seed);
  const PermutationTestResult perm =
      permutation_test_conditional(inst.types, *inst.traits, partition, args.permutations, rng);
  const auto details = per_community_chi_squared(inst.types, *inst.traits, partition);

  const std::string output =
      args.output.empty() ? (args.format == "json" ? "test_report.json" : "test_report.csv")
                          : args.output;
  if (args.format == "json") {
    json per_community = json::array();
    for (const auto& d : details) {
      per_community.push_back({{"community_id", d.community_id},
                               {"size", d.size},
                               {"table",
                                {{d.table.counts[0][0], d.table.counts[0][1]},
                                 {d.table.counts[1][0], d.table.counts[1][1]}}},
                               {"statistic", d.statistic},
                               {"df", d.df}});
    }
    json doc{{"statistic", overall.statistic},
             {"df", overall.df},
             {"p_asymptotic", overall.p_defined ? json(overall.p_asymptotic) : json(nullptr)},
             {"p_permutation", perm.p_value},
             {"permutations", perm.permutations},
             {"seed", args.seed},
             {"per_community", std::move(per_community)}};
    write_text_file(output, doc.dump(2) + "\n");
  } else {
    std::string text = "community_id,size,n00,n01,n10,n11,statistic,df\n";
    for (const auto& d : details) {
      text += std::to_string(d.community_id) + ',' + std::to_string(d.size) + ',' +
              std::to_string(d.table.counts[0][0]) + ',' + std::to_string(d.table.counts[0][1]) +
              ',' + std::to_string(d.table.counts[1][0]) + ',' +
              std::to_string(d.table.counts[1][1]) + ',' + format_double(d.statistic) + ',' +
              std::to_string(d.df) + '\n';
    }
    text += "total," + std::to_string(n) + ",,,,," + format_double(overall.statistic) + ',' +
            std::to_string(overall.df) + '\n';
    text += "# p_asymptotic " +
            (overall.p_defined ? format_double(overall.p_asymptotic) : std::string("undefined")) +
            " p_permutation " + format_double(perm.p_value) + " permutations " +
            std::to_string(perm.permutations) + " seed " + std::to_string(args.seed) + '\n';
    write_text_file(output, text);
  }
  std::cout << "wrote " << output << " (statistic " << format_double(overall.statistic) << ", df "
            << overall.df << ", p_perm " << format_double(perm.p_value) << ")\n";
  return 0;
}

// Shared flag block for the two experiment subcommands; values override the
// config file only when explicitly passed.
struct ExperimentArgs {
  std::string config_path;
  int nodes = 0;
  double p_within = 0.0, p_between = 0.0, flat_p = 0.0;
  std::string type_assignment, connectivity, graph_mode, stepper;
  std::vector<double> beta;
  int max_attempts = 0;
  int replicates = 0;
  long long budget = 0, record_every = 0;
  double alpha = 0.0;
  int permutations = 0;
  std::uint64_t seed = 0;
  std::string output, format;
};

void add_experiment_flags(CLI::App* cmd, ExperimentArgs& args, bool with_stepper) {
  cmd->add_option("--config", args.config_path, "JSON config file (flags override its values)");
  cmd->add_option("--nodes", args.nodes, "node count");
  cmd->add_option("--p-within", args.p_within, "same-type edge probability");
  cmd->add_option("--p-between", args.p_between, "cross-type edge probability");
  cmd->add_option("--type-assignment", args.type_assignment, "exact-half-split|uniform-random")
      ->check(CLI::IsMember({"exact-half-split", "uniform-random"}));
  cmd->add_option("--connectivity", args.connectivity,
                  "resample-until-connected|allow-disconnected")
      ->check(CLI::IsMember({"resample-until-connected", "allow-disconnected"}));
  cmd->add_option("--max-attempts", args.max_attempts, "resampling budget");
  cmd->add_option("--graph-mode", args.graph_mode, "fixed-graph|resample-per-replicate")
      ->check(CLI::IsMember({"fixed-graph", "resample-per-replicate"}));
  cmd->add_option("--replicates", args.replicates, "replicate count");
  cmd->add_option("--budget", args.budget, "steps per replicate (default 200 sweeps)");
  cmd->add_option("--record-every", args.record_every, "sampling period in steps (default one sweep)");
  if (with_stepper) {
    cmd->add_option("--stepper", args.stepper, "neutral|biased")
        ->check(CLI::IsMember({"neutral", "biased"}));
    cmd->add_option("--beta", args.beta,
                    "acceptance probabilities b00 b01 b10 b11 ([type][trait])")
        ->expected(4);
    cmd->add_option("--alpha", args.alpha, "significance level");
    cmd->add_option("--permutations", args.permutations, "permutation count");
  }
  cmd->add_option("--flat-p", args.flat_p, "edge probability of the flat arm");
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--output", args.output, "output path prefix");
  cmd->add_option("--format", args.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig resolve_config(const CLI::App* cmd, const ExperimentArgs& args,
                                const std::string& default_prefix) {
  ExperimentConfig cfg;
  cfg.output_prefix = default_prefix;
  if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
  if (cmd->count("--nodes")) cfg.generator.n = args.nodes;
  if (cmd->count("--p-within")) cfg.generator.p_within = args.p_within;
  if (cmd->count("--p-between")) cfg.generator.p_between = args.p_between;
  if (cmd->count("--type-assignment"))
    cfg.generator.type_assignment = parse_type_assignment(args.type_assignment);
  if (cmd->count("--connectivity"))
    cfg.generator.connectivity = parse_connectivity(args.connectivity);
  if (cmd->count("--max-attempts")) cfg.generator.max_attempts = args.max_attempts;
  if (cmd->count("--graph-mode"))
    cfg.graph_mode = args.graph_mode == "fixed-graph" ? GraphMode::kFixedGraph
                                                      : GraphMode::kResamplePerReplicate;
  if (cmd->count("--replicates")) cfg.replicates = args.replicates;
  if (cmd->count("--budget")) cfg.budget = args.budget;
  if (cmd->count("--record-every")) cfg.record_every = args.record_every;
  if (cmd->get_option_no_throw("--stepper") != nullptr && cmd->count("--stepper"))
    cfg.stepper = make_stepper(args.stepper, args.beta);
  if (cmd->get_option_no_throw("--alpha") != nullptr && cmd->count("--alpha")) cfg.alpha = args.alpha;
  if (cmd->get_option_no_throw("--permutations") != nullptr && cmd->count("--permutations"))
    cfg.permutations = args.permutations;
  if (cmd->count("--flat-p")) cfg.flat_p = args.flat_p;
  if (cmd->count("--seed")) cfg.master_seed = args.seed;
  if (cmd->count("--output")) cfg.output_prefix = args.output;
  if (cmd->count("--format")) cfg.format = args.format;
  return cfg;
}

int run_fig1_command(const ExperimentConfig& cfg) {
  const Fig1Result result = run_fig1(cfg);
  const auto written = write_fig1_outputs(result, cfg);
  std::cout << "wrote";
  for (const auto& path : written) std::cout << ' ' << path;
  std::cout << " (" << cfg.replicates << " replicates per arm)\n";
  return 0;
}

int run_ci_contrast_command(const ExperimentConfig& cfg) {
  const CiContrastResult result = run_ci_contrast(cfg);
  const auto written = write_ci_contrast_outputs(result, cfg);
  std::cout << "wrote";
  for (const auto& path : written) std::cout << ' ' << path;
  std::cout << " (unconditional rejection " << format_double(result.unconditional_rejection_rate)
            << ", conditional rejection " << format_double(result.conditional_rejection_rate)
            << ", excluded " << result.excluded << ")\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"neutral copying dynamics on homophilous networks: simulation and tests"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand("generate", "sample a two-type planted-partition graph");
  gen->add_option("--nodes", gen_args.params.n, "node count");
  gen->add_option("--p-within", gen_args.params.p_within, "same-type edge probability");
  gen->add_option("--p-between", gen_args.params.p_between, "cross-type edge probability");
  gen->add_option("--type-assignment", gen_args.type_assignment, "exact-half-split|uniform-random")
      ->check(CLI::IsMember({"exact-half-split", "uniform-random"}));
  gen->add_option("--connectivity", gen_args.connectivity,
                  "resample-until-connected|allow-disconnected")
      ->check(CLI::IsMember({"resample-until-connected", "allow-disconnected"}));
  gen->add_option("--max-attempts", gen_args.params.max_attempts, "resampling budget");
  gen->add_option("--seed", gen_args.params.seed, "generator seed");
  gen->add_option("--output", gen_args.output, "output prefix (<prefix>.edges, <prefix>.attrs.csv)");
  gen->add_option("--format", gen_args.format, "csv|json (mixing summary)")
      ->check(CLI::IsMember({"csv", "json"}));

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "run copying dynamics on a graph");
  sim->add_option("--graph", sim_args.graph_path, "edge list file")->required();
  sim->add_option("--attrs", sim_args.attrs_path, "node,social_type[,trait] CSV")->required();
  sim->add_option("--traits", sim_args.traits_path, "initial trait state CSV (optional)");
  sim->add_option("--stepper", sim_args.stepper, "neutral|biased")
      ->check(CLI::IsMember({"neutral", "biased"}));
  sim->add_option("--beta", sim_args.beta, "acceptance probabilities b00 b01 b10 b11")->expected(4);
  sim->add_option("--budget", sim_args.budget, "steps per replicate (default 200 sweeps)");
  sim->add_option("--record-every", sim_args.record_every, "sampling period (default one sweep)");
  sim->add_option("--replicates", sim_args.replicates, "replicate count");
  sim->add_flag("--no-early-stop", sim_args.no_early_stop, "keep stepping after absorption");
  sim->add_option("--save-state", sim_args.save_state, "write the last replicate's final traits");
  sim->add_option("--seed", sim_args.seed, "master seed");
  sim->add_option("--output", sim_args.output, "trajectory output file");
  sim->add_option("--format", sim_args.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  CommunitiesArgs com_args;
  CLI::App* com = app.add_subcommand("communities", "detect communities by edge-betweenness removal");
  com->add_option("--graph", com_args.graph_path, "edge list file")->required();
  com->add_option("--nodes", com_args.nodes, "node count (default: max id + 1)");
  com->add_option("--seed", com_args.seed, "unused; accepted for interface uniformity");
  com->add_option("--output", com_args.output, "partition output file");
  com->add_option("--format", com_args.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  TestArgs test_args;
  CLI::App* test = app.add_subcommand("test", "chi-squared association and permutation tests");
  test->add_option("--graph", test_args.graph_path, "edge list file")->required();
  test->add_option("--attrs", test_args.attrs_path, "node,social_type[,trait] CSV")->required();
  test->add_option("--traits", test_args.traits_path, "trait state CSV (optional)");
  test->add_option("--partition", test_args.partition_path,
                   "node,community CSV (default: girvan-newman on the graph)");
  test->add_flag("--unconditional", test_args.unconditional,
                 "test against the single-block partition");
  test->add_option("--permutations", test_args.permutations, "permutation count");
  test->add_option("--seed", test_args.seed, "permutation stream seed");
  test->add_option("--output", test_args.output, "report output file");
  test->add_option("--format", test_args.format, "json|csv")->check(CLI::IsMember({"csv", "json"}));

  ExperimentArgs fig1_args;
  CLI::App* fig1 = app.add_subcommand("fig1", "chi-squared trajectories: assortative vs flat arm");
  add_experiment_flags(fig1, fig1_args, false);

  ExperimentArgs ci_args;
  CLI::App* ci = app.add_subcommand("ci-contrast",
                                    "conditional vs unconditional independence tests at the "
                                    "chi-squared peak");
  add_experiment_flags(ci, ci_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(gen)) return run_generate(gen_args);
    if (app.got_subcommand(sim)) return run_simulate(sim_args);
    if (app.got_subcommand(com)) return run_communities(com_args);
    if (app.got_subcommand(test)) return run_test(test_args);
    if (app.got_subcommand(fig1)) return run_fig1_command(resolve_config(fig1, fig1_args, "fig1"));
    if (app.got_subcommand(ci))
      return run_ci_contrast_command(resolve_config(ci, ci_args, "cicontrast"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace netdrift
