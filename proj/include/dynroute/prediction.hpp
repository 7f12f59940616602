#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dynroute/error.hpp"
#include "dynroute/fundamental_diagram.hpp"
#include "dynroute/simulation.hpp"
#include "dynroute/timeline.hpp"
#include "dynroute/types.hpp"

namespace dynroute {

/// Per edge-direction traffic state for one tick. `flow` is vehicles per
/// second, computed as raw density (vehicles per meter) times mean speed.
struct EdgeFlowAggregate {
  EdgeId edge_id = 0;
  Direction direction = Direction::Forward;
  double density = 0.0;      // width-normalised, as used by the speed model
  double raw_density = 0.0;  // vehicles / m
  double mean_speed = 0.0;   // m/s
  double flow = 0.0;         // vehicles / s
  double travel_time = 0.0;  // s

  bool operator==(const EdgeFlowAggregate&) const = default;
};

/// Aggregates for every edge direction of `world` (forward then backward, by edge id).
inline std::vector<EdgeFlowAggregate> compute_aggregates(const WorldState& world) {
  std::vector<EdgeFlowAggregate> out;
  out.reserve(world.graph.edge_count() * 2);
  std::vector<double> speeds;
  for (const auto& e : world.graph.edges()) {
    for (Direction d : {Direction::Forward, Direction::Backward}) {
      speeds.clear();
      for (VehicleId vid : e.vehicles(d)) speeds.push_back(world.vehicle(vid).current_speed);
      EdgeFlowAggregate a;
      a.edge_id = e.id;
      a.direction = d;
      a.density = e.traffic(d);
      a.raw_density = static_cast<double>(e.vehicles(d).size()) / e.distance;
      a.mean_speed = edge_average_speed(e, speeds);
      a.flow = a.raw_density * a.mean_speed;
      a.travel_time = e.travel_time(d);
      out.push_back(a);
    }
  }
  return out;
}

/// Called once per recorded timestamp with the world as of that timestamp.
using TickObserver = std::function<void(Timestamp, const WorldState&)>;

/// Rolls a copy of `world` forward to `horizon` seconds and records every
/// edge's per-direction travel time at each tick (timestamp 0 is the current
/// state). `world` itself is left untouched.
inline WeightTimeline predict_timeline(const WorldState& world, Timestamp horizon,
                                       const TickObserver& observer = {}) {
  const Timestamp tick = world.config.tick;
  if (horizon < 0 || horizon % tick != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "horizon " + std::to_string(horizon) + " must be >= 0 and a multiple of the tick " + std::to_string(tick));
  }
  WorldState sim = world;
  auto timeline = WeightTimeline::for_graph(sim.graph);
  const Timestamp start = sim.clock;
  const auto record = [&] {
    const Timestamp t = sim.clock - start;
    timeline.append_from_graph(t, sim.graph);
    if (observer) observer(t, sim);
  };
  record();
  while (sim.clock - start < horizon) {
    advance(sim);
    record();
  }
  return timeline;
}

/// Travel times of an empty network, as a single-key timeline.
inline WeightTimeline free_flow_timeline(const RoadGraph& graph) {
  auto timeline = WeightTimeline::for_graph(graph);
  std::vector<double> w(timeline.arc_count());
  for (const auto& e : graph.edges()) {
    w[timeline.arc_index(e.start_node, e.end_node).value()] = e.free_flow_time();
    w[timeline.arc_index(e.end_node, e.start_node).value()] = e.free_flow_time();
  }
  timeline.append(0, std::move(w));
  return timeline;
}

}  // namespace dynroute
