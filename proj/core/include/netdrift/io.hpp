#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netdrift/community.hpp"
#include "netdrift/dynamics.hpp"
#include "netdrift/generator.hpp"
#include "netdrift/stats.hpp"

namespace netdrift {

// Stable decimal rendering used across all text output ("%.12g"; "nan" for
// undefined values).
std::string format_double(double x);

// Edge-list text format: one "u v" line per edge with u < v, lines sorted,
// newline-terminated. Lines starting with '#' are skipped on read.
void write_edge_list(const Graph& g, const std::string& path);

// If n is omitted it is inferred as max node id + 1 (an empty file gives an
// empty graph). All read errors throw std::runtime_error naming the path.
Graph read_edge_list(const std::string& path, std::optional<int> n = std::nullopt);

// Attribute file: CSV with header node,social_type.
void write_attributes(const SocialTypeVector& types, const std::string& path);

// Trait state file: CSV with header node,social_type,trait.
void write_trait_state(const SocialTypeVector& types, const CulturalState& traits,
                       const std::string& path);

struct NodeTable {
  SocialTypeVector types;
  std::optional<CulturalState> traits;
};

// Accepts header node,social_type or node,social_type,trait. Rows may be in
// any order but must cover node ids 0..n-1 exactly once.
NodeTable read_node_table(const std::string& path);

// Partition file: CSV with header node,community, community ids dense from 0.
void write_partition(const Partition& p, const std::string& path);
Partition read_partition(const std::string& path);

// Trajectory CSV, one row per recorded sample per replicate, header
// replicate,step,sweep,chi2,n00,n01,n10,n11,absorbed. meta_lines are written
// first as '#'-prefixed comments.
void write_trajectories_csv(const std::vector<TrajectoryRecord>& records,
                            const std::vector<std::string>& meta_lines, const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace netdrift
