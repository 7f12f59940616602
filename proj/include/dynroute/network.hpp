#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "dynroute/error.hpp"
#include "dynroute/graph.hpp"
#include "dynroute/types.hpp"

namespace dynroute {

/// Connected subgraph of `graph` with exactly `node_count` nodes and at most
/// `edge_count` edges.
///
/// Nodes are collected breadth-first from a seeded random root (the next root
/// in the seeded order is tried when a component is too small). The BFS tree
/// edges are always kept so the result stays connected; the remaining induced
/// edges are kept in seeded random order up to the budget. Surviving nodes and
/// edges are renumbered densely in their original id order, so asking for the
/// whole of a connected graph returns it unchanged.
inline RoadGraph subset_graph(const RoadGraph& graph, std::size_t node_count, std::size_t edge_count,
                              std::uint64_t seed) {
  if (node_count > graph.node_count()) {
    throw Error(ErrorCode::Unsatisfiable, "requested " + std::to_string(node_count) + " nodes from a graph with " +
                                              std::to_string(graph.node_count()));
  }
  if (edge_count > graph.edge_count()) {
    throw Error(ErrorCode::Unsatisfiable, "requested " + std::to_string(edge_count) + " edges from a graph with " +
                                              std::to_string(graph.edge_count()));
  }
  if (node_count == 0) return {};
  if (edge_count + 1 < node_count) {
    throw Error(ErrorCode::Unsatisfiable, std::to_string(node_count) + " connected nodes need at least " +
                                              std::to_string(node_count - 1) + " edges");
  }

  std::mt19937_64 rng(seed);
  std::vector<NodeId> roots(graph.node_count());
  for (std::size_t i = 0; i < roots.size(); ++i) roots[i] = static_cast<NodeId>(i);
  std::shuffle(roots.begin(), roots.end(), rng);

  std::vector<NodeId> picked;
  std::vector<EdgeId> tree_edges;
  std::vector<char> in_set(graph.node_count(), 0);
  for (NodeId root : roots) {
    picked.clear();
    tree_edges.clear();
    std::ranges::fill(in_set, 0);
    std::queue<NodeId> frontier;
    in_set[static_cast<std::size_t>(root)] = 1;
    picked.push_back(root);
    frontier.push(root);
    while (!frontier.empty() && picked.size() < node_count) {
      const NodeId u = frontier.front();
      frontier.pop();
      const auto& n = graph.node(u);
      for (std::size_t k = 0; k < n.node_connections.size() && picked.size() < node_count; ++k) {
        const NodeId v = n.node_connections[k];
        if (in_set[static_cast<std::size_t>(v)]) continue;
        in_set[static_cast<std::size_t>(v)] = 1;
        picked.push_back(v);
        tree_edges.push_back(n.edge_connections[k]);
        frontier.push(v);
      }
    }
    if (picked.size() == node_count) break;
  }
  if (picked.size() < node_count) {
    throw Error(ErrorCode::Unsatisfiable,
                "no connected component holds " + std::to_string(node_count) + " nodes");
  }

  std::vector<char> is_tree(graph.edge_count(), 0);
  for (EdgeId e : tree_edges) is_tree[static_cast<std::size_t>(e)] = 1;
  std::vector<EdgeId> extra;
  for (const auto& e : graph.edges()) {
    if (in_set[static_cast<std::size_t>(e.start_node)] && in_set[static_cast<std::size_t>(e.end_node)] &&
        !is_tree[static_cast<std::size_t>(e.id)]) {
      extra.push_back(e.id);
    }
  }
  std::vector<EdgeId> kept = tree_edges;
  if (kept.size() + extra.size() > edge_count) {
    std::shuffle(extra.begin(), extra.end(), rng);
    extra.resize(edge_count - kept.size());
  }
  kept.insert(kept.end(), extra.begin(), extra.end());
  std::ranges::sort(kept);

  std::vector<NodeId> old_ids = picked;
  std::ranges::sort(old_ids);
  std::vector<NodeId> new_id(graph.node_count(), -1);
  std::vector<NodeRecord> nodes;
  nodes.reserve(old_ids.size());
  for (std::size_t i = 0; i < old_ids.size(); ++i) {
    new_id[static_cast<std::size_t>(old_ids[i])] = static_cast<NodeId>(i);
    auto n = graph.node(old_ids[i]);
    n.id = static_cast<NodeId>(i);
    nodes.push_back(std::move(n));
  }
  std::vector<EdgeRecord> edges;
  edges.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    auto e = graph.edge(kept[i]);
    e.id = static_cast<EdgeId>(i);
    e.start_node = new_id[static_cast<std::size_t>(e.start_node)];
    e.end_node = new_id[static_cast<std::size_t>(e.end_node)];
    edges.push_back(std::move(e));
  }
  return build_graph(std::move(nodes), std::move(edges));
}

/// Great-circle distance in meters.
inline double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadius = 6'371'000.0;
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * kRad;
  const double dlon = (lon2 - lon1) * kRad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadius * std::asin(std::sqrt(a));
}

struct GridNetworkSpec {
  std::size_t rows = 10;
  std::size_t cols = 10;
  double origin_lat = 37.77;
  double origin_lon = -122.41;
  double spacing_deg = 0.002;   // about 180-220 m between junctions
  double jitter = 0.3;          // fraction of spacing
  double diagonal_probability = 0.25;
  std::size_t arterial_every = 3;  // every n-th row/column is an arterial
  double sigma_min = 0.5;
  double sigma_max = 1.5;
  std::uint64_t seed = 1;
};

/// Street-grid style network: jittered junctions, full row/column streets and
/// a random sprinkling of diagonal shortcuts. Edge distances are great-circle
/// lengths; categories use the names of `default_categories()`.
inline RoadGraph make_grid_network(const GridNetworkSpec& spec, const CategoryTable& categories = default_categories()) {
  if (spec.rows == 0 || spec.cols == 0) throw Error(ErrorCode::InvalidArgument, "grid needs rows, cols >= 1");
  if (!(spec.sigma_min > 0.0 && spec.sigma_min <= spec.sigma_max && spec.sigma_max <= 3.0)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < sigma_min <= sigma_max <= 3");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-spec.jitter, spec.jitter);
  std::uniform_real_distribution<double> sigma(spec.sigma_min, spec.sigma_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto id_of = [&](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * spec.cols + c); };
  std::vector<NodeRecord> nodes;
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      NodeRecord n;
      n.id = id_of(r, c);
      n.latitude = spec.origin_lat + (static_cast<double>(r) + jitter(rng)) * spec.spacing_deg;
      n.longitude = spec.origin_lon + (static_cast<double>(c) + jitter(rng)) * spec.spacing_deg;
      n.category = "junction";
      n.gaussian_mean = 0.0;
      n.gaussian_sigma = sigma(rng);
      nodes.push_back(std::move(n));
    }
  }

  const auto category_for = [&](std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) -> std::string {
    const auto every = std::max<std::size_t>(spec.arterial_every, 1);
    if ((r0 == r1 && r0 % every == 0) || (c0 == c1 && c0 % every == 0)) return "arterial";
    if (r0 != r1 && c0 != c1) return "local";
    return unit(rng) < 0.5 ? "collector" : "local";
  };

  std::vector<EdgeRecord> edges;
  const auto add_edge = [&](std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) {
    EdgeRecord e;
    e.id = static_cast<EdgeId>(edges.size());
    e.start_node = id_of(r0, c0);
    e.end_node = id_of(r1, c1);
    const auto& a = nodes[static_cast<std::size_t>(e.start_node)];
    const auto& b = nodes[static_cast<std::size_t>(e.end_node)];
    e.distance = std::round(haversine_m(a.latitude, a.longitude, b.latitude, b.longitude) * 10.0) / 10.0;
    e.category = category_for(r0, c0, r1, c1);
    const auto it = categories.find(e.category);
    if (it == categories.end()) throw Error(ErrorCode::UnknownCategory, e.category);
    e.thickness = it->second.thickness;
    e.free_flow_speed = it->second.free_flow_speed;
    e.jam_speed = it->second.jam_speed;
    e.forward_travel_time = e.backward_travel_time = e.free_flow_time();
    edges.push_back(std::move(e));
  };
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      if (c + 1 < spec.cols) add_edge(r, c, r, c + 1);
      if (r + 1 < spec.rows) add_edge(r, c, r + 1, c);
      if (r + 1 < spec.rows && c + 1 < spec.cols && unit(rng) < spec.diagonal_probability) {
        add_edge(r, c, r + 1, c + 1);
      }
    }
  }
  return build_graph(std::move(nodes), std::move(edges));
}

}  // namespace dynroute
