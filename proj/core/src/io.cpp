#include "netdrift/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace netdrift {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

long long parse_int(const std::string& text, const std::string& path) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) fail(path, "bad integer field '" + text + "'");
    return value;
  } catch (const std::logic_error&) {
    fail(path, "bad integer field '" + text + "'");
  }
}

std::uint8_t parse_binary(const std::string& text, const std::string& path) {
  const long long v = parse_int(text, path);
  if (v != 0 && v != 1) fail(path, "expected 0/1, got '" + text + "'");
  return static_cast<std::uint8_t>(v);
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(path, "write failed");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_edge_list(const Graph& g, const std::string& path) {
  auto out = open_out(path);
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  finish_write(out, path);
}

Graph read_edge_list(const std::string& path, std::optional<int> n) {
  auto in = open_in(path);
  std::vector<Edge> edges;
  int max_id = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    std::istringstream ss(line);
    int u = 0, v = 0;
    if (!(ss >> u >> v)) fail(path, "bad edge line '" + line + "'");
    std::string rest;
    if (ss >> rest) fail(path, "trailing content on edge line '" + line + "'");
    edges.emplace_back(u, v);
    max_id = std::max({max_id, u, v});
  }
  const int node_count = n.value_or(max_id + 1);
  try {
    return Graph(node_count, std::move(edges));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

void write_attributes(const SocialTypeVector& types, const std::string& path) {
  auto out = open_out(path);
  out << "node,social_type\n";
  for (std::size_t v = 0; v < types.size(); ++v)
    out << v << ',' << static_cast<int>(types[v]) << '\n';
  finish_write(out, path);
}

void write_trait_state(const SocialTypeVector& types, const CulturalState& traits,
                       const std::string& path) {
  if (types.size() != traits.size())
    throw std::invalid_argument("write_trait_state: length mismatch");
  auto out = open_out(path);
  out << "node,social_type,trait\n";
  for (std::size_t v = 0; v < types.size(); ++v)
    out << v << ',' << static_cast<int>(types[v]) << ',' << static_cast<int>(traits[v]) << '\n';
  finish_write(out, path);
}

NodeTable read_node_table(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  do {
    if (!std::getline(in, line)) fail(path, "missing header");
  } while (skippable(line));

  bool with_traits;
  if (line == "node,social_type,trait") {
    with_traits = true;
  } else if (line == "node,social_type") {
    with_traits = false;
  } else {
    fail(path, "unrecognized header '" + line + "'");
  }

  std::vector<std::pair<std::uint8_t, std::uint8_t>> rows;  // (type, trait) by node
  std::vector<char> seen;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    const auto fields = split_csv(line);
    if (fields.size() != (with_traits ? 3u : 2u)) fail(path, "bad row '" + line + "'");
    const long long node = parse_int(fields[0], path);
    if (node < 0) fail(path, "negative node id");
    if (node >= static_cast<long long>(rows.size())) {
      rows.resize(node + 1);
      seen.resize(node + 1, 0);
    }
    if (seen[node]) fail(path, "duplicate node " + std::to_string(node));
    seen[node] = 1;
    rows[node].first = parse_binary(fields[1], path);
    if (with_traits) rows[node].second = parse_binary(fields[2], path);
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) fail(path, "missing node " + std::to_string(v));

  NodeTable table;
  table.types.reserve(rows.size());
  for (const auto& row : rows) table.types.push_back(row.first);
  if (with_traits) {
    CulturalState traits;
    traits.reserve(rows.size());
    for (const auto& row : rows) traits.push_back(row.second);
    table.traits = std::move(traits);
  }
  return table;
}

void write_partition(const Partition& p, const std::string& path) {
  auto out = open_out(path);
  out << "node,community\n";
  for (std::size_t v = 0; v < p.block_of.size(); ++v) out << v << ',' << p.block_of[v] << '\n';
  finish_write(out, path);
}

Partition read_partition(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  do {
    if (!std::getline(in, line)) fail(path, "missing header");
  } while (skippable(line));
  if (line != "node,community") fail(path, "unrecognized header '" + line + "'");

  std::vector<int> ids;
  std::vector<char> seen;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2) fail(path, "bad row '" + line + "'");
    const long long node = parse_int(fields[0], path);
    const long long community = parse_int(fields[1], path);
    if (node < 0) fail(path, "negative node id");
    if (node >= static_cast<long long>(ids.size())) {
      ids.resize(node + 1, -1);
      seen.resize(node + 1, 0);
    }
    if (seen[node]) fail(path, "duplicate node " + std::to_string(node));
    seen[node] = 1;
    ids[node] = static_cast<int>(community);
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) fail(path, "missing node " + std::to_string(v));
  try {
    return Partition::from_block_ids(ids);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

void write_trajectories_csv(const std::vector<TrajectoryRecord>& records,
                            const std::vector<std::string>& meta_lines, const std::string& path) {
  auto out = open_out(path);
  for (const auto& meta : meta_lines) out << "# " << meta << '\n';
  out << "replicate,step,sweep,chi2,n00,n01,n10,n11,absorbed\n";
  for (std::size_t rep = 0; rep < records.size(); ++rep) {
    const auto& rec = records[rep];
    for (const auto& sample : rec.samples) {
      out << rep << ',' << sample.step << ','
          << format_double(static_cast<double>(sample.step) / rec.n) << ','
          << format_double(sample.chi2) << ',' << sample.table.counts[0][0] << ','
          << sample.table.counts[0][1] << ',' << sample.table.counts[1][0] << ','
          << sample.table.counts[1][1] << ',' << (sample.absorbed ? 1 : 0) << '\n';
    }
  }
  finish_write(out, path);
}

void write_text_file(const std::string& path, const std::string& contents) {
  auto out = open_out(path);
  out << contents;
  finish_write(out, path);
}

std::string read_text_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace netdrift
