#pragma once

#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dynroute/graph.hpp"
#include "dynroute/harness.hpp"
#include "dynroute/io.hpp"
#include "dynroute/prediction.hpp"
#include "dynroute/routing.hpp"
#include "dynroute/simulation.hpp"

// Writers for every artifact the CLI emits. CSV headers are fixed; JSON
// documents mirror the CSV columns.

namespace dynroute::report {

using io::format_number;

// -- comparisons ---------------------------------------------------------------

inline void write_comparisons_csv(std::ostream& out, std::span<const ComparisonRecord> records) {
  out << "src,dst,T,tau,delta\n";
  for (const auto& r : records) {
    out << r.source << ',' << r.destination << ',' << format_number(r.static_time) << ','
        << format_number(r.dynamic_time) << ',' << format_number(r.delta) << '\n';
  }
}

inline nlohmann::json comparisons_json(std::span<const ComparisonRecord> records) {
  auto arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"src", r.source}, {"dst", r.destination}, {"T", r.static_time}, {"tau", r.dynamic_time},
                   {"delta", r.delta}});
  }
  return arr;
}

// -- sweep ---------------------------------------------------------------------

inline void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "alpha,beta,n,lambda\n";
  for (const auto& c : cells) {
    out << format_number(c.alpha) << ',' << format_number(c.beta) << ',' << c.n << ',' << format_number(c.lambda)
        << '\n';
  }
}

inline nlohmann::json sweep_json(std::span<const SweepCell> cells) {
  auto arr = nlohmann::json::array();
  for (const auto& c : cells) arr.push_back({{"alpha", c.alpha}, {"beta", c.beta}, {"n", c.n}, {"lambda", c.lambda}});
  return arr;
}

// -- simulation ------------------------------------------------------------------

inline void write_events(std::ostream& out, std::span<const Event> events) {
  out << "tick,event_kind,vehicle_id,node_or_edge_id\n";
  for (const auto& e : events) out << e.tick << ',' << to_string(e.kind) << ',' << e.vehicle << ',' << e.location << '\n';
}

inline void write_snapshot_header(std::ostream& out) { out << "tick,edge_id,fwd_density,bwd_density,fwd_tt,bwd_tt\n"; }

inline void write_snapshot_rows(std::ostream& out, Timestamp tick, const RoadGraph& graph) {
  for (const auto& e : graph.edges()) {
    out << tick << ',' << e.id << ',' << format_number(e.forward_traffic) << ',' << format_number(e.backward_traffic)
        << ',' << format_number(e.forward_travel_time) << ',' << format_number(e.backward_travel_time) << '\n';
  }
}

inline nlohmann::json snapshot_json(Timestamp tick, const RoadGraph& graph) {
  auto arr = nlohmann::json::array();
  for (const auto& e : graph.edges()) {
    arr.push_back({{"tick", tick},
                   {"edge_id", e.id},
                   {"fwd_density", e.forward_traffic},
                   {"bwd_density", e.backward_traffic},
                   {"fwd_tt", e.forward_travel_time},
                   {"bwd_tt", e.backward_travel_time}});
  }
  return arr;
}

inline void write_aggregate_header(std::ostream& out) { out << "tick,edge_id,dir,k,u,q,tt\n"; }

inline void write_aggregate_rows(std::ostream& out, Timestamp tick, std::span<const EdgeFlowAggregate> rows) {
  for (const auto& a : rows) {
    out << tick << ',' << a.edge_id << ',' << to_string(a.direction) << ',' << format_number(a.density) << ','
        << format_number(a.mean_speed) << ',' << format_number(a.flow) << ',' << format_number(a.travel_time) << '\n';
  }
}

/// Graphviz rendering with `tt_fwd/tt_bwd` edge labels.
inline std::string to_dot(const RoadGraph& graph, Timestamp tick) {
  std::ostringstream out;
  out << "graph road_network_t" << tick << " {\n";
  for (const auto& n : graph.nodes()) {
    out << "  n" << n.id << " [label=\"" << n.id << "\", pos=\"" << format_number(n.longitude) << ','
        << format_number(n.latitude) << "\"];\n";
  }
  for (const auto& e : graph.edges()) {
    out << "  n" << e.start_node << " -- n" << e.end_node << " [label=\""
        << fmt::format("{:.1f}/{:.1f}", e.forward_travel_time, e.backward_travel_time) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

// -- routes ----------------------------------------------------------------------

inline nlohmann::json route_json(const RouteResult& r) {
  auto hops = nlohmann::json::array();
  for (const auto& h : r.hops) {
    hops.push_back({{"edge", fmt::format("{}-{}", h.from, h.to)}, {"from", h.from}, {"to", h.to},
                    {"depart", h.depart}, {"weight", h.weight}});
  }
  return {{"path", r.path}, {"hops", hops}, {"total_time", r.total_time}};
}

inline std::string route_text(const RouteResult& r) {
  std::ostringstream out;
  out << "path:";
  for (std::size_t i = 0; i < r.path.size(); ++i) out << (i ? " -> " : " ") << r.path[i];
  out << '\n';
  for (const auto& h : r.hops) {
    out << "  " << h.from << " -> " << h.to << "  depart " << format_number(h.depart) << "  weight "
        << format_number(h.weight) << '\n';
  }
  out << "total: " << format_number(r.total_time) << '\n';
  return out.str();
}

}  // namespace dynroute::report
