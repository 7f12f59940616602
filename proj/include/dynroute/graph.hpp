#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynroute/error.hpp"
#include "dynroute/types.hpp"

namespace dynroute {

/// Road network: junctions joined by bidirectional road segments.
///
/// Node and edge ids equal their index. Every edge is traversable both ways and
/// is listed in the connection lists of both of its endpoints; for each node,
/// `node_connections[k]` is the neighbour reached through `edge_connections[k]`.
class RoadGraph {
 public:
  RoadGraph() = default;

  /// Validates records and wires up connectivity. Input order is irrelevant;
  /// ids must form 0..N-1 (nodes) and 0..M-1 (edges).
  static RoadGraph build(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }

  const NodeRecord& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  NodeRecord& node(NodeId id) { return nodes_.at(static_cast<std::size_t>(id)); }
  const EdgeRecord& edge(EdgeId id) const { return edges_.at(static_cast<std::size_t>(id)); }
  EdgeRecord& edge(EdgeId id) { return edges_.at(static_cast<std::size_t>(id)); }

  bool contains(NodeId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
  }

  std::span<const NodeId> neighbors(NodeId id) const { return node(id).node_connections; }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const {
    const auto& n = node(u);
    for (std::size_t k = 0; k < n.node_connections.size(); ++k) {
      if (n.node_connections[k] == v) return n.edge_connections[k];
    }
    return std::nullopt;
  }

  /// Nodes reachable from `root`, in BFS order.
  std::vector<NodeId> reachable_from(NodeId root) const {
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<NodeId> order;
    std::queue<NodeId> frontier;
    seen[static_cast<std::size_t>(root)] = 1;
    frontier.push(root);
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      order.push_back(u);
      for (NodeId v : neighbors(u)) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          frontier.push(v);
        }
      }
    }
    return order;
  }

  bool is_connected() const {
    return nodes_.empty() || reachable_from(0).size() == nodes_.size();
  }

  bool operator==(const RoadGraph&) const = default;

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
};

namespace detail {

inline void validate_node(const NodeRecord& n) {
  if (!std::isfinite(n.latitude) || !std::isfinite(n.longitude)) {
    throw Error(ErrorCode::MalformedRow, "node " + std::to_string(n.id) + ": non-finite position");
  }
  if (!(n.gaussian_sigma > 0.0 && n.gaussian_sigma <= 3.0)) {
    throw Error(ErrorCode::MalformedRow,
                "node " + std::to_string(n.id) + ": gaussian_sigma must lie in (0, 3]");
  }
  if (!std::isfinite(n.gaussian_mean) || n.gaussian_mean < 0.0) {
    throw Error(ErrorCode::MalformedRow,
                "node " + std::to_string(n.id) + ": gaussian_mean must be finite and >= 0");
  }
  if (n.external_vehicle_count < 0) {
    throw Error(ErrorCode::MalformedRow,
                "node " + std::to_string(n.id) + ": negative external vehicle count");
  }
}

inline void validate_edge(const EdgeRecord& e) {
  const auto where = "edge " + std::to_string(e.id) + ": ";
  if (!(e.distance > 0.0) || !std::isfinite(e.distance)) {
    throw Error(ErrorCode::MalformedRow, where + "distance must be > 0");
  }
  if (!(e.thickness > 0.0)) throw Error(ErrorCode::MalformedRow, where + "thickness must be > 0");
  if (!(e.jam_speed > 0.0 && e.jam_speed < e.free_flow_speed) || !std::isfinite(e.free_flow_speed)) {
    throw Error(ErrorCode::MalformedRow, where + "need 0 < jam_speed < free_flow_speed");
  }
  if (e.forward_traffic < 0.0 || e.backward_traffic < 0.0) {
    throw Error(ErrorCode::MalformedRow, where + "negative traffic");
  }
}

}  // namespace detail

inline RoadGraph RoadGraph::build(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges) {
  std::ranges::sort(nodes, {}, &NodeRecord::id);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && nodes[i].id == nodes[i - 1].id) {
      throw Error(ErrorCode::DuplicateNodeId, "node id " + std::to_string(nodes[i].id));
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != static_cast<NodeId>(i)) {
      throw Error(ErrorCode::MalformedRow, "node ids must be contiguous from 0; missing id " +
                                               std::to_string(i));
    }
    detail::validate_node(nodes[i]);
    nodes[i].node_connections.clear();
    nodes[i].edge_connections.clear();
  }

  std::ranges::sort(edges, {}, &EdgeRecord::id);
  const auto in_range = [&](NodeId id) {
    return id >= 0 && static_cast<std::size_t>(id) < nodes.size();
  };
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.id != static_cast<EdgeId>(i)) {
      throw Error(ErrorCode::MalformedRow,
                  "edge ids must be unique and contiguous from 0; offending id " +
                      std::to_string(e.id));
    }
    if (!in_range(e.start_node) || !in_range(e.end_node)) {
      throw Error(ErrorCode::DanglingEndpoint,
                  "edge " + std::to_string(e.id) + " references node " +
                      std::to_string(in_range(e.start_node) ? e.end_node : e.start_node));
    }
    if (e.start_node == e.end_node) {
      throw Error(ErrorCode::MalformedRow, "edge " + std::to_string(e.id) + " is a self-loop");
    }
    detail::validate_edge(e);
  }

  RoadGraph g;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  for (const auto& e : g.edges_) {
    if (g.find_edge(e.start_node, e.end_node)) {
      throw Error(ErrorCode::MalformedRow,
                  "edge " + std::to_string(e.id) + " duplicates an existing node pair");
    }
    auto& a = g.nodes_[static_cast<std::size_t>(e.start_node)];
    auto& b = g.nodes_[static_cast<std::size_t>(e.end_node)];
    a.node_connections.push_back(e.end_node);
    a.edge_connections.push_back(e.id);
    b.node_connections.push_back(e.start_node);
    b.edge_connections.push_back(e.id);
  }
  return g;
}

/// Free function form of RoadGraph::build.
inline RoadGraph build_graph(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges) {
  return RoadGraph::build(std::move(nodes), std::move(edges));
}

}  // namespace dynroute
