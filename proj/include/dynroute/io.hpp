#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dynroute/error.hpp"
#include "dynroute/graph.hpp"
#include "dynroute/timeline.hpp"
#include "dynroute/types.hpp"

// Plain-text formats:
//   nodes    id,lat,lon,category[,gaussian_mean[,gaussian_sigma]]
//   edges    id,start,end,distance,category
//   timeline "key: value" header lines, then "timestamp: T" blocks of
//            from,to,travel_time rows
// All files accept blank lines and '#' comments. CSV files carry a one-line
// header.

namespace dynroute::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && first != last;
}

template <typename T>
T field(std::string_view text, std::size_t line_no, std::string_view name) {
  T value{};
  if (!parse_number(text, value)) {
    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": " +
                                             std::string(name) + " '" + std::string(text) +
                                             "' is not a number");
  }
  return value;
}

inline bool is_skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

/// Calls `row(fields, line_no)` for each data row, skipping the header.
template <typename RowFn>
void for_each_csv_row(std::istream& in, RowFn&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    if (!header_seen) {
      header_seen = true;
      // Accept header-less files: a numeric first field is data.
      long long probe = 0;
      if (!parse_number(split(line).front(), probe)) continue;
    }
    row(split(line), line_no);
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  return out;
}

}  // namespace detail

/// Shortest text that parses back to the same double.
inline std::string format_number(double v) { return fmt::format("{}", v); }

// -- nodes -------------------------------------------------------------------

inline std::vector<NodeRecord> parse_nodes(std::istream& in) {
  std::vector<NodeRecord> nodes;
  std::set<NodeId> ids;
  detail::for_each_csv_row(in, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() < 4 || f.size() > 6) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected 4-6 columns, got " +
                                               std::to_string(f.size()));
    }
    NodeRecord n;
    n.id = detail::field<NodeId>(f[0], line_no, "id");
    n.latitude = detail::field<double>(f[1], line_no, "lat");
    n.longitude = detail::field<double>(f[2], line_no, "lon");
    n.category = std::string(f[3]);
    if (f.size() > 4 && !f[4].empty()) n.gaussian_mean = detail::field<double>(f[4], line_no, "gaussian_mean");
    if (f.size() > 5 && !f[5].empty()) n.gaussian_sigma = detail::field<double>(f[5], line_no, "gaussian_sigma");
    if (n.id < 0) throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": negative id");
    if (!ids.insert(n.id).second) {
      throw Error(ErrorCode::DuplicateNodeId, "line " + std::to_string(line_no) + ": id " + std::to_string(n.id));
    }
    try {
      ::dynroute::detail::validate_node(n);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": " + e.what());
    }
    nodes.push_back(std::move(n));
  });
  return nodes;
}

inline std::vector<NodeRecord> load_nodes(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_nodes(in);
}

inline void write_nodes(std::ostream& out, const std::vector<NodeRecord>& nodes) {
  out << "id,lat,lon,category,gaussian_mean,gaussian_sigma\n";
  for (const auto& n : nodes) {
    out << n.id << ',' << format_number(n.latitude) << ',' << format_number(n.longitude) << ','
        << n.category << ',' << format_number(n.gaussian_mean) << ','
        << format_number(n.gaussian_sigma) << '\n';
  }
}

// -- categories --------------------------------------------------------------

/// Reads `{"name": {"thickness": m, "free_flow_speed": m/s, "jam_speed": m/s}, ...}`.
inline CategoryTable parse_categories(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "category table must be an object");
  CategoryTable table;
  for (const auto& [name, spec] : doc.items()) {
    try {
      CategorySpec c{spec.at("thickness").get<double>(), spec.at("free_flow_speed").get<double>(),
                     spec.at("jam_speed").get<double>()};
      if (!(c.thickness > 0.0) || !(c.jam_speed > 0.0 && c.jam_speed < c.free_flow_speed)) {
        throw Error(ErrorCode::InvalidConfig,
                    "category '" + name + "': need thickness > 0 and 0 < jam_speed < free_flow_speed");
      }
      table.emplace(name, c);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, "category '" + name + "': " + e.what());
    }
  }
  return table;
}

inline CategoryTable load_categories(const std::string& path) {
  auto in = detail::open_input(path);
  try {
    return parse_categories(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
}

inline nlohmann::json categories_to_json(const CategoryTable& table) {
  auto doc = nlohmann::json::object();
  for (const auto& [name, c] : table) {
    doc[name] = {{"thickness", c.thickness}, {"free_flow_speed", c.free_flow_speed}, {"jam_speed", c.jam_speed}};
  }
  return doc;
}

// -- edges -------------------------------------------------------------------

/// Edges come back with zero traffic, empty vehicle lists and free-flow travel times.
inline std::vector<EdgeRecord> parse_edges(std::istream& in, const CategoryTable& categories) {
  std::vector<EdgeRecord> edges;
  detail::for_each_csv_row(in, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 5) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected 5 columns, got " +
                                               std::to_string(f.size()));
    }
    EdgeRecord e;
    e.id = detail::field<EdgeId>(f[0], line_no, "id");
    e.start_node = detail::field<NodeId>(f[1], line_no, "start");
    e.end_node = detail::field<NodeId>(f[2], line_no, "end");
    e.distance = detail::field<double>(f[3], line_no, "distance");
    e.category = std::string(f[4]);
    if (!(e.distance > 0.0) || !std::isfinite(e.distance)) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": distance must be > 0");
    }
    const auto it = categories.find(e.category);
    if (it == categories.end()) {
      throw Error(ErrorCode::UnknownCategory, "line " + std::to_string(line_no) + ": '" + e.category + "'");
    }
    e.thickness = it->second.thickness;
    e.free_flow_speed = it->second.free_flow_speed;
    e.jam_speed = it->second.jam_speed;
    e.forward_travel_time = e.backward_travel_time = e.free_flow_time();
    edges.push_back(std::move(e));
  });
  return edges;
}

inline std::vector<EdgeRecord> load_edges(const std::string& path, const CategoryTable& categories) {
  auto in = detail::open_input(path);
  return parse_edges(in, categories);
}

inline void write_edges(std::ostream& out, const std::vector<EdgeRecord>& edges) {
  out << "id,start,end,distance,category\n";
  for (const auto& e : edges) {
    out << e.id << ',' << e.start_node << ',' << e.end_node << ',' << format_number(e.distance) << ','
        << e.category << '\n';
  }
}

inline RoadGraph load_graph(const std::string& nodes_path, const std::string& edges_path,
                            const CategoryTable& categories) {
  return build_graph(load_nodes(nodes_path), load_edges(edges_path, categories));
}

// -- timeline ----------------------------------------------------------------

struct TimelineDocument {
  WeightTimeline timeline;
  std::size_t block_count = 0;  // timestamp blocks in the file, duplicates included
};

/// Parses a timeline document. With `symmetric: true` each row also sets the
/// reverse arc. A block repeating the previous timestamp must carry identical
/// weights and is folded into it.
inline TimelineDocument parse_timeline_document(std::istream& in) {
  struct Block {
    Timestamp t;
    std::map<Arc, double> weights;
  };
  std::optional<std::size_t> declared_nodes;
  bool symmetric = false;
  std::vector<Block> blocks;

  std::string raw;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::MalformedTimeline, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (detail::is_skippable(raw)) continue;
    const auto line = detail::trim(raw);
    const auto colon = line.find(':');
    if (colon != std::string_view::npos) {
      const auto key = detail::trim(line.substr(0, colon));
      const auto value = detail::trim(line.substr(colon + 1));
      if (key == "timestamp") {
        Timestamp t = 0;
        if (!detail::parse_number(value, t) || t < 0) fail("bad timestamp '" + std::string(value) + "'");
        blocks.push_back({t, {}});
      } else if (!blocks.empty()) {
        fail("header key '" + std::string(key) + "' after first timestamp block");
      } else if (key == "nodes") {
        std::size_t n = 0;
        if (!detail::parse_number(value, n)) fail("bad node count");
        declared_nodes = n;
      } else if (key == "symmetric") {
        if (value == "true") {
          symmetric = true;
        } else if (value == "false") {
          symmetric = false;
        } else {
          fail("symmetric must be true or false");
        }
      } else {
        fail("unknown header key '" + std::string(key) + "'");
      }
      continue;
    }
    if (blocks.empty()) fail("row before first timestamp block");
    const auto f = detail::split(line);
    if (f.size() != 3) fail("expected from,to,travel_time");
    NodeId from = 0, to = 0;
    double w = 0.0;
    if (!detail::parse_number(f[0], from) || !detail::parse_number(f[1], to) || !detail::parse_number(f[2], w)) {
      fail("non-numeric field");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::NonPositiveWeight, "line " + std::to_string(line_no));
    }
    auto& block = blocks.back().weights;
    const auto put = [&](Arc a) {
      const auto [it, inserted] = block.emplace(a, w);
      if (!inserted && it->second != w) {
        fail("conflicting weights for " + std::to_string(a.from) + "->" + std::to_string(a.to));
      }
    };
    put({from, to});
    if (symmetric) put({to, from});
  }

  if (blocks.empty()) throw Error(ErrorCode::EmptyTimeline, "no timestamp blocks");

  std::vector<Arc> arcs;
  NodeId max_id = -1;
  for (const auto& [a, w] : blocks.front().weights) {
    arcs.push_back(a);
    max_id = std::max({max_id, a.from, a.to});
  }
  const std::size_t n = declared_nodes.value_or(static_cast<std::size_t>(max_id + 1));
  WeightTimeline timeline(n, arcs);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (block.weights.size() != arcs.size() ||
        !std::equal(arcs.begin(), arcs.end(), block.weights.begin(),
                    [](const Arc& a, const auto& kv) { return a == kv.first; })) {
      throw Error(ErrorCode::MalformedTimeline,
                  "timestamp " + std::to_string(block.t) + " has a different arc set than the first block");
    }
    if (b > 0 && block.t == blocks[b - 1].t) {
      if (block.weights != blocks[b - 1].weights) {
        throw Error(ErrorCode::MalformedTimeline,
                    "repeated timestamp " + std::to_string(block.t) + " with different weights");
      }
      continue;
    }
    std::vector<double> w;
    w.reserve(arcs.size());
    for (const auto& kv : block.weights) w.push_back(kv.second);
    timeline.append(block.t, std::move(w));
  }
  return {std::move(timeline), blocks.size()};
}

inline WeightTimeline parse_timeline(std::istream& in) { return parse_timeline_document(in).timeline; }

inline WeightTimeline parse_timeline(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_timeline(in);
}

inline WeightTimeline load_timeline(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_timeline(in);
}

/// Writes every arc explicitly (`symmetric: false`).
inline void write_timeline(std::ostream& out, const WeightTimeline& timeline) {
  out << "nodes: " << timeline.node_count() << "\nsymmetric: false\n";
  for (std::size_t k = 0; k < timeline.timestamps().size(); ++k) {
    out << "timestamp: " << timeline.timestamps()[k] << '\n';
    const auto w = timeline.weights_for_key(k);
    for (std::size_t a = 0; a < timeline.arc_count(); ++a) {
      out << timeline.arcs()[a].from << ',' << timeline.arcs()[a].to << ',' << format_number(w[a]) << '\n';
    }
  }
}

inline void save_text(const std::string& path, const std::string& text) {
  auto out = detail::open_output(path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace dynroute::io
