#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynroute/error.hpp"
#include "dynroute/graph.hpp"
#include "dynroute/types.hpp"

namespace dynroute {

using Timestamp = std::int64_t;  // whole seconds

struct Arc {
  NodeId from = 0;
  NodeId to = 0;
  auto operator<=>(const Arc&) const = default;
};

class WeightMatrix;

/// Travel-time matrices keyed by timestamp.
///
/// Storage is sparse: a fixed set of directed arcs (the topology) and, per
/// timestamp, one positive weight per arc. Entries for node pairs without an
/// arc are absent at every timestamp. Lookup between keys is piecewise
/// constant: time t reads the matrix of the largest key <= t, and anything
/// past the last key reads the last matrix.
class WeightTimeline {
 public:
  WeightTimeline() = default;

  /// Topology only; weights are added per timestamp with `append`.
  WeightTimeline(std::size_t node_count, std::vector<Arc> arcs) : node_count_(node_count) {
    std::ranges::sort(arcs);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const auto& a = arcs[i];
      if (a.from < 0 || a.to < 0 || static_cast<std::size_t>(a.from) >= node_count ||
          static_cast<std::size_t>(a.to) >= node_count) {
        throw Error(ErrorCode::DanglingEndpoint, "arc " + std::to_string(a.from) + "->" +
                                                     std::to_string(a.to) + " out of range");
      }
      if (a.from == a.to) {
        throw Error(ErrorCode::MalformedTimeline, "self-loop arc at node " + std::to_string(a.from));
      }
      if (i > 0 && arcs[i - 1] == a) {
        throw Error(ErrorCode::MalformedTimeline,
                    "duplicate arc " + std::to_string(a.from) + "->" + std::to_string(a.to));
      }
    }
    arcs_ = std::move(arcs);
    row_start_.assign(node_count + 1, 0);
    for (const auto& a : arcs_) ++row_start_[static_cast<std::size_t>(a.from) + 1];
    for (std::size_t i = 0; i < node_count; ++i) row_start_[i + 1] += row_start_[i];
  }

  /// Both directions of every graph edge, no weights yet.
  static WeightTimeline for_graph(const RoadGraph& graph) {
    std::vector<Arc> arcs;
    arcs.reserve(graph.edge_count() * 2);
    for (const auto& e : graph.edges()) {
      arcs.push_back({e.start_node, e.end_node});
      arcs.push_back({e.end_node, e.start_node});
    }
    return WeightTimeline(graph.node_count(), std::move(arcs));
  }

  /// Appends the weights recorded at `t`, aligned with `arcs()`.
  void append(Timestamp t, std::vector<double> weights) {
    if (timestamps_.empty() ? t != 0 : t <= timestamps_.back()) {
      throw Error(ErrorCode::MalformedTimeline,
                  "timestamp " + std::to_string(t) +
                      (timestamps_.empty() ? " (first timestamp must be 0)"
                                           : " is not after " + std::to_string(timestamps_.back())));
    }
    if (weights.size() != arcs_.size()) {
      throw Error(ErrorCode::MalformedTimeline, "expected " + std::to_string(arcs_.size()) +
                                                    " weights, got " + std::to_string(weights.size()));
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
        throw Error(ErrorCode::NonPositiveWeight,
                    "arc " + std::to_string(arcs_[i].from) + "->" + std::to_string(arcs_[i].to) +
                        " at t=" + std::to_string(t));
      }
    }
    timestamps_.push_back(t);
    weights_.push_back(std::move(weights));
  }

  /// Appends weights read off a graph's per-direction travel times.
  void append_from_graph(Timestamp t, const RoadGraph& graph) {
    std::vector<double> w(arcs_.size());
    for (const auto& e : graph.edges()) {
      w[arc_index(e.start_node, e.end_node).value()] = e.forward_travel_time;
      w[arc_index(e.end_node, e.start_node).value()] = e.backward_travel_time;
    }
    append(t, std::move(w));
  }

  std::size_t node_count() const { return node_count_; }
  std::size_t arc_count() const { return arcs_.size(); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Timestamp>& timestamps() const { return timestamps_; }
  bool empty() const { return timestamps_.empty(); }

  /// Indices into `arcs()` of the arcs leaving `u`, ascending by target.
  auto out_arcs(NodeId u) const {
    const auto i = static_cast<std::size_t>(u);
    return std::views::iota(row_start_[i], row_start_[i + 1]);
  }
  NodeId arc_target(std::size_t arc) const { return arcs_[arc].to; }

  std::optional<std::size_t> arc_index(NodeId from, NodeId to) const {
    if (from < 0 || static_cast<std::size_t>(from) >= node_count_) return std::nullopt;
    const auto first = arcs_.begin() + static_cast<std::ptrdiff_t>(row_start_[static_cast<std::size_t>(from)]);
    const auto last = arcs_.begin() + static_cast<std::ptrdiff_t>(row_start_[static_cast<std::size_t>(from) + 1]);
    const auto it = std::lower_bound(first, last, Arc{from, to});
    if (it == last || it->to != to) return std::nullopt;
    return static_cast<std::size_t>(it - arcs_.begin());
  }

  /// Index of the key in effect at time t.
  std::size_t key_index_at(double t) const {
    if (timestamps_.empty()) throw Error(ErrorCode::EmptyTimeline, "no timestamps recorded");
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "query time must be >= 0");
    const auto it = std::upper_bound(timestamps_.begin(), timestamps_.end(), t,
                                     [](double q, Timestamp k) { return q < static_cast<double>(k); });
    return static_cast<std::size_t>(it - timestamps_.begin()) - 1;
  }

  double weight(std::size_t arc, double t) const { return weights_[key_index_at(t)][arc]; }

  std::span<const double> weights_for_key(std::size_t key) const { return weights_.at(key); }

  WeightMatrix weights_at(double t) const;

  bool operator==(const WeightTimeline&) const = default;

 private:
  std::size_t node_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> row_start_{0};
  std::vector<Timestamp> timestamps_;
  std::vector<std::vector<double>> weights_;
};

/// N x N view of one recorded timestamp. Borrows from its timeline, which must
/// outlive it.
class WeightMatrix {
 public:
  WeightMatrix(const WeightTimeline& timeline, std::size_t key) : timeline_(&timeline), key_(key) {}

  std::size_t size() const { return timeline_->node_count(); }
  Timestamp timestamp() const { return timeline_->timestamps()[key_]; }

  std::optional<double> at(NodeId i, NodeId j) const {
    const auto arc = timeline_->arc_index(i, j);
    if (!arc) return std::nullopt;
    return timeline_->weights_for_key(key_)[*arc];
  }

  // Adjacency interface shared with WeightTimeline; `t` is ignored.
  std::size_t node_count() const { return size(); }
  auto out_arcs(NodeId u) const { return timeline_->out_arcs(u); }
  NodeId arc_target(std::size_t arc) const { return timeline_->arc_target(arc); }
  double weight(std::size_t arc, double /*t*/ = 0.0) const {
    return timeline_->weights_for_key(key_)[arc];
  }

  /// Copies the view into a single-key timeline at t = 0.
  WeightTimeline as_constant_timeline() const {
    WeightTimeline out(timeline_->node_count(), timeline_->arcs());
    const auto w = timeline_->weights_for_key(key_);
    out.append(0, std::vector<double>(w.begin(), w.end()));
    return out;
  }

 private:
  const WeightTimeline* timeline_;
  std::size_t key_;
};

inline WeightMatrix WeightTimeline::weights_at(double t) const { return {*this, key_index_at(t)}; }

/// Free function form of WeightTimeline::weights_at.
inline WeightMatrix weights_at(const WeightTimeline& timeline, double t) {
  return timeline.weights_at(t);
}

}  // namespace dynroute
