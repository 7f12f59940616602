#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynroute/error.hpp"
#include "dynroute/timeline.hpp"
#include "dynroute/types.hpp"

namespace dynroute {

/// Directed adjacency with per-arc weights that may depend on departure time.
/// WeightTimeline (time-dependent) and WeightMatrix (time ignored) both model it.
template <typename W>
concept ArcWeights = requires(const W& w, NodeId u, std::size_t arc, double t) {
  { w.node_count() } -> std::convertible_to<std::size_t>;
  { w.out_arcs(u) } -> std::ranges::input_range;
  { w.arc_target(arc) } -> std::convertible_to<NodeId>;
  { w.weight(arc, t) } -> std::convertible_to<double>;
};

inline constexpr double kUnreached = std::numeric_limits<double>::infinity();
inline constexpr NodeId kNoParent = -1;

struct RouteHop {
  NodeId from = 0;
  NodeId to = 0;
  double depart = 0.0;
  double weight = 0.0;

  bool operator==(const RouteHop&) const = default;
};

struct RouteResult {
  std::vector<NodeId> path;            // source .. destination
  std::vector<double> departure_times; // one per node left, i.e. path.size() - 1
  std::vector<RouteHop> hops;
  double total_time = 0.0;
  std::vector<double> time_labels;  // per node, kUnreached if never labelled
  std::vector<NodeId> parent;       // per node, kNoParent if none

  bool operator==(const RouteResult&) const = default;
};

/// Receives (node, previous label, new label) on every label improvement.
using LabelObserver = std::function<void(NodeId, double, double)>;

namespace detail {

template <ArcWeights W>
void check_endpoints(const W& weights, NodeId source, NodeId destination) {
  const auto n = weights.node_count();
  const auto valid = [n](NodeId v) { return v >= 0 && static_cast<std::size_t>(v) < n; };
  if (!valid(source) || !valid(destination)) {
    throw Error(ErrorCode::InvalidArgument, "source/destination " + std::to_string(source) + "/" +
                                                std::to_string(destination) + " not in a graph of " +
                                                std::to_string(n) + " nodes");
  }
  if (source == destination) throw Error(ErrorCode::InvalidArgument, "source equals destination");
}

template <ArcWeights W>
std::optional<std::size_t> find_arc(const W& weights, NodeId from, NodeId to) {
  for (std::size_t arc : weights.out_arcs(from)) {
    if (weights.arc_target(arc) == to) return arc;
  }
  return std::nullopt;
}

template <ArcWeights W>
double checked_weight(const W& weights, std::size_t arc, double t, NodeId from) {
  const double w = weights.weight(arc, t);
  if (!(w > 0.0)) {
    throw Error(ErrorCode::NonPositiveWeight, "arc " + std::to_string(from) + "->" +
                                                  std::to_string(weights.arc_target(arc)) + " at t=" +
                                                  std::to_string(t));
  }
  return w;
}

/// Walks parents back from `destination` and fills path, hops and departures.
/// Hop weights are read at the departure label of each hop's tail.
template <ArcWeights W>
void assemble_route(const W& weights, NodeId source, NodeId destination, RouteResult& r) {
  if (r.time_labels[static_cast<std::size_t>(destination)] == kUnreached) {
    throw Error(ErrorCode::Unreachable,
                "no route from " + std::to_string(source) + " to " + std::to_string(destination));
  }
  std::vector<NodeId> reversed{destination};
  for (NodeId v = destination; v != source;) {
    v = r.parent[static_cast<std::size_t>(v)];
    if (v == kNoParent || reversed.size() > r.parent.size()) {
      throw Error(ErrorCode::Unreachable, "broken parent chain at node " + std::to_string(reversed.back()));
    }
    reversed.push_back(v);
  }
  r.path.assign(reversed.rbegin(), reversed.rend());
  r.total_time = r.time_labels[static_cast<std::size_t>(destination)];
  for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
    const NodeId u = r.path[i];
    const NodeId v = r.path[i + 1];
    const double depart = r.time_labels[static_cast<std::size_t>(u)];
    const auto arc = find_arc(weights, u, v);
    r.departure_times.push_back(depart);
    r.hops.push_back({u, v, depart, weights.weight(*arc, depart)});
  }
}

using QueueEntry = std::pair<double, NodeId>;  // (tentative time, node): ties pop the lower id
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

}  // namespace detail

/// Forward-looking route over time-dependent weights.
///
/// Label-correcting Dijkstra: every node may be re-expanded whenever its
/// arrival label improves (no visited set), and each arc is priced at the
/// moment its tail is left, `weight(arc, time[u])`. The destination is
/// labelled but never expanded. Vehicles never wait at nodes. Stale queue
/// entries (popped time above the node's current label) are skipped.
///
/// On timelines where arriving later can never mean leaving an arc earlier
/// (FIFO), the result is the earliest possible arrival.
template <ArcWeights W>
RouteResult dynamic_dijkstra(const W& weights, NodeId source, NodeId destination,
                             const LabelObserver& on_label = {}) {
  detail::check_endpoints(weights, source, destination);
  const auto n = weights.node_count();
  RouteResult r;
  r.time_labels.assign(n, kUnreached);
  r.parent.assign(n, kNoParent);
  r.time_labels[static_cast<std::size_t>(source)] = 0.0;

  detail::MinQueue queue;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [t, u] = queue.top();
    queue.pop();
    const double depart = r.time_labels[static_cast<std::size_t>(u)];
    if (t > depart) continue;
    for (std::size_t arc : weights.out_arcs(u)) {
      const NodeId v = weights.arc_target(arc);
      const double alt = depart + detail::checked_weight(weights, arc, depart, u);
      auto& label = r.time_labels[static_cast<std::size_t>(v)];
      if (alt < label) {
        if (on_label) on_label(v, label, alt);
        label = alt;
        r.parent[static_cast<std::size_t>(v)] = u;
        if (v != destination) queue.push({alt, v});
      }
    }
  }
  detail::assemble_route(weights, source, destination, r);
  return r;
}

/// Textbook Dijkstra on fixed weights (`weight(arc, 0)`), stopping once the
/// destination is settled. Equal tentative times settle the lower node id
/// first; a label only changes on strict improvement.
template <ArcWeights W>
RouteResult static_dijkstra(const W& weights, NodeId source, NodeId destination) {
  detail::check_endpoints(weights, source, destination);
  const auto n = weights.node_count();
  RouteResult r;
  r.time_labels.assign(n, kUnreached);
  r.parent.assign(n, kNoParent);
  r.time_labels[static_cast<std::size_t>(source)] = 0.0;
  std::vector<char> settled(n, 0);

  detail::MinQueue queue;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [t, u] = queue.top();
    queue.pop();
    if (settled[static_cast<std::size_t>(u)]) continue;
    settled[static_cast<std::size_t>(u)] = 1;
    if (u == destination) break;
    for (std::size_t arc : weights.out_arcs(u)) {
      const NodeId v = weights.arc_target(arc);
      if (settled[static_cast<std::size_t>(v)]) continue;
      const double alt = t + detail::checked_weight(weights, arc, 0.0, u);
      auto& label = r.time_labels[static_cast<std::size_t>(v)];
      if (alt < label) {
        label = alt;
        r.parent[static_cast<std::size_t>(v)] = u;
        queue.push({alt, v});
      }
    }
  }
  // Hops of a static route are priced at t = 0 regardless of departure.
  detail::assemble_route(weights, source, destination, r);
  for (auto& hop : r.hops) hop.weight = weights.weight(*detail::find_arc(weights, hop.from, hop.to), 0.0);
  return r;
}

/// Seconds needed to drive `path` when leaving its first node at `depart`,
/// pricing each hop at the moment it starts.
template <ArcWeights W>
double experienced_time(const W& weights, std::span<const NodeId> path, double depart = 0.0) {
  double t = depart;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto arc = (path[i] >= 0 && static_cast<std::size_t>(path[i]) < weights.node_count())
                         ? detail::find_arc(weights, path[i], path[i + 1])
                         : std::nullopt;
    if (!arc) {
      throw Error(ErrorCode::MissingEdge,
                  "no arc " + std::to_string(path[i]) + "->" + std::to_string(path[i + 1]));
    }
    t += weights.weight(*arc, t);
  }
  return t - depart;
}

}  // namespace dynroute
