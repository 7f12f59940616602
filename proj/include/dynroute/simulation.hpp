#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynroute/error.hpp"
#include "dynroute/fundamental_diagram.hpp"
#include "dynroute/graph.hpp"
#include "dynroute/timeline.hpp"
#include "dynroute/types.hpp"

namespace dynroute {

using Rng = std::mt19937_64;

enum class ChoiceMode : std::uint8_t {
  /// Edge weight grows with transformed traffic (busier roads attract vehicles).
  Proportional,
  /// Edge weight is 1 / (floor + transformed traffic).
  Inverse,
};

enum class OpenNodePolicy : std::uint8_t { All, None, Leaves, Listed };

struct SimulationConfig {
  Timestamp tick = 1;  // seconds per step
  Thresholds thresholds;
  ChoiceMode choice_mode = ChoiceMode::Proportional;
  SpeedModel speed_model = SpeedModel::Banded;
  OpenNodePolicy open_policy = OpenNodePolicy::Leaves;
  std::vector<NodeId> open_nodes;  // used with OpenNodePolicy::Listed
  bool mean_chaining = true;
  double vehicle_thickness = 2.0;
  double vehicle_max_speed = 36.0;
  double choice_floor = 1e-6;

  void validate() const {
    if (tick <= 0) throw Error(ErrorCode::InvalidConfig, "tick must be a positive whole number of seconds");
    thresholds.validate();
    if (!(vehicle_thickness > 0.0)) throw Error(ErrorCode::InvalidConfig, "vehicle_thickness must be > 0");
    if (!(vehicle_max_speed > 0.0)) throw Error(ErrorCode::InvalidConfig, "vehicle_max_speed must be > 0");
    if (!(choice_floor > 0.0)) throw Error(ErrorCode::InvalidConfig, "choice_floor must be > 0");
  }

  bool operator==(const SimulationConfig&) const = default;
};

/// Everything needed to advance the simulation. Copying a world forks it:
/// the copy evolves independently and, given the same calls, identically.
struct WorldState {
  RoadGraph graph;
  std::vector<VehicleRecord> vehicles;  // live vehicles, ascending id
  Timestamp clock = 0;
  Rng rng;
  SimulationConfig config;
  std::vector<char> open;  // per node
  VehicleId next_vehicle_id = 0;

  std::size_t vehicle_count() const { return vehicles.size(); }

  const VehicleRecord& vehicle(VehicleId id) const {
    const auto it = std::ranges::lower_bound(vehicles, id, {}, &VehicleRecord::id);
    if (it == vehicles.end() || it->id != id) {
      throw Error(ErrorCode::InconsistentMembership, "unknown vehicle " + std::to_string(id));
    }
    return *it;
  }
  VehicleRecord& vehicle(VehicleId id) {
    return const_cast<VehicleRecord&>(static_cast<const WorldState&>(*this).vehicle(id));
  }

  bool is_open(NodeId n) const { return open[static_cast<std::size_t>(n)] != 0; }

  bool operator==(const WorldState&) const = default;
};

enum class EventKind : std::uint8_t { Move, NodeArrival, EdgeEnter, Exit, ExternalArrival };

constexpr std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Move: return "move";
    case EventKind::NodeArrival: return "node_arrival";
    case EventKind::EdgeEnter: return "edge_enter";
    case EventKind::Exit: return "exit";
    case EventKind::ExternalArrival: return "external_arrival";
  }
  return "?";
}

/// `location` is a node id for node_arrival/exit/external_arrival and an edge
/// id for move/edge_enter.
struct Event {
  Timestamp tick = 0;
  EventKind kind = EventKind::Move;
  VehicleId vehicle = 0;
  std::int64_t location = 0;

  bool operator==(const Event&) const = default;
};

struct TickReport {
  Timestamp tick = 0;  // clock at the start of the step
  std::size_t vehicles_before = 0;
  std::size_t arrivals = 0;  // external vehicles that entered
  std::size_t exits = 0;
  std::size_t vehicles_after = 0;

  bool operator==(const TickReport&) const = default;
};

// -- junction choice ---------------------------------------------------------

/// Quadratic state transform of edge traffic: (x / beta)^2 up to beta,
/// saturating at 1 in the jam state (x > beta).
inline double transformation(double traffic, const Thresholds& thresholds) {
  thresholds.validate();
  if (!(traffic >= 0.0)) throw Error(ErrorCode::InvalidArgument, "traffic must be >= 0");
  if (traffic > thresholds.beta) return 1.0;
  const double x = traffic / thresholds.beta;
  return x * x;
}

struct ChoiceOptions {
  Thresholds thresholds;
  ChoiceMode mode = ChoiceMode::Proportional;
  double floor = 1e-6;
  bool allow_exit = false;
};

struct EdgeChoice {
  EdgeId edge = kExit;
  double probability = 0.0;
};

/// Normalised choice distribution at `node`: one entry per incident edge in
/// connection order, then kExit when `allow_exit` is set.
inline std::vector<EdgeChoice> choice_distribution(const RoadGraph& graph, NodeId node, const ChoiceOptions& options) {
  if (!graph.contains(node)) throw Error(ErrorCode::InvalidArgument, "unknown node " + std::to_string(node));
  const auto& n = graph.node(node);
  if (n.edge_connections.empty() && !options.allow_exit) {
    throw Error(ErrorCode::DeadEnd, "closed node " + std::to_string(node) + " has no incident edges");
  }
  const auto weight_of = [&](double traffic) {
    const double r = transformation(traffic, options.thresholds);
    return options.mode == ChoiceMode::Proportional ? options.floor + r : 1.0 / (options.floor + r);
  };
  std::vector<EdgeChoice> choices;
  choices.reserve(n.edge_connections.size() + 1);
  double sum = 0.0;
  for (EdgeId id : n.edge_connections) {
    const auto& e = graph.edge(id);
    const double traffic = e.start_node == node ? e.forward_traffic : e.backward_traffic;
    choices.push_back({id, weight_of(traffic)});
    sum += choices.back().probability;
  }
  if (options.allow_exit) {
    choices.push_back({kExit, weight_of(0.0)});
    sum += choices.back().probability;
  }
  for (auto& c : choices) c.probability /= sum;
  return choices;
}

/// Draws an index from a normalised probability vector.
template <typename Range, typename Proj>
std::size_t sample_index(const Range& items, Proj proj, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double cumulative = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < std::size(items); ++i) {
    const double p = proj(items[i]);
    if (p <= 0.0) continue;
    cumulative += p;
    last = i;
    if (u < cumulative) return i;
  }
  return last;
}

/// Picks the edge a vehicle at `node` takes next, or kExit.
inline EdgeId select_next_edge(const RoadGraph& graph, NodeId node, const ChoiceOptions& options, Rng& rng) {
  const auto choices = choice_distribution(graph, node, options);
  return choices[sample_index(choices, [](const EdgeChoice& c) { return c.probability; }, rng)].edge;
}

// -- external traffic --------------------------------------------------------

/// Vehicles entering at `node` this tick: a normal(mean, sigma) draw rounded to
/// the nearest integer and clamped at 0. With `chain_mean` the count becomes the
/// node's next mean.
inline std::int64_t sample_external_arrivals(NodeRecord& node, Rng& rng, bool chain_mean = true) {
  if (!(node.gaussian_sigma > 0.0 && node.gaussian_sigma <= 3.0)) {
    throw Error(ErrorCode::InvalidArgument, "gaussian_sigma must lie in (0, 3]");
  }
  std::normal_distribution<double> normal(node.gaussian_mean, node.gaussian_sigma);
  const auto count = std::max<std::int64_t>(0, std::llround(normal(rng)));
  node.external_vehicle_count = count;
  if (chain_mean) node.gaussian_mean = static_cast<double>(count);
  return count;
}

// -- world -------------------------------------------------------------------

namespace detail {

inline std::vector<char> resolve_open_nodes(const RoadGraph& graph, const SimulationConfig& config) {
  std::vector<char> open(graph.node_count(), 0);
  switch (config.open_policy) {
    case OpenNodePolicy::All: std::ranges::fill(open, 1); break;
    case OpenNodePolicy::None: break;
    case OpenNodePolicy::Leaves:
      for (const auto& n : graph.nodes()) open[static_cast<std::size_t>(n.id)] = n.edge_connections.size() <= 1;
      break;
    case OpenNodePolicy::Listed:
      for (NodeId id : config.open_nodes) {
        if (!graph.contains(id)) throw Error(ErrorCode::InvalidConfig, "open node " + std::to_string(id) + " not in graph");
        open[static_cast<std::size_t>(id)] = 1;
      }
      break;
  }
  return open;
}

inline void enter_edge(WorldState& world, VehicleRecord& v, NodeId from, EdgeId edge_id) {
  auto& e = world.graph.edge(edge_id);
  v.edge_id = edge_id;
  v.direction = e.start_node == from ? Direction::Forward : Direction::Backward;
  v.state = VehicleState::OnEdge;
  v.remaining_distance = e.distance;
  v.time_to_complete = e.travel_time(v.direction);
  v.current_speed = e.distance / v.time_to_complete;
  e.vehicles(v.direction).push_back(v.id);
}

}  // namespace detail

/// Recomputes density, vehicle speeds, mean speed and travel time of every
/// edge direction from the vehicles currently listed on it.
inline void refresh_traffic(WorldState& world) {
  const auto& cfg = world.config;
  std::vector<VehicleRecord> members;
  std::vector<double> speeds;
  for (std::size_t id = 0; id < world.graph.edge_count(); ++id) {
    auto& e = world.graph.edge(static_cast<EdgeId>(id));
    for (Direction d : {Direction::Forward, Direction::Backward}) {
      members.clear();
      for (VehicleId vid : e.vehicles(d)) members.push_back(world.vehicle(vid));
      const double density = edge_density(e, d, members);
      e.traffic(d) = density;
      const double speed = vehicle_speed(density, e, cfg.thresholds, cfg.speed_model);
      speeds.clear();
      for (VehicleId vid : e.vehicles(d)) {
        auto& v = world.vehicle(vid);
        v.current_speed = std::min(speed, v.max_speed);
        speeds.push_back(v.current_speed);
      }
      const double mean = edge_average_speed(e, speeds);
      e.travel_time(d) = edge_travel_time(e, mean);
      for (VehicleId vid : e.vehicles(d)) {
        auto& v = world.vehicle(vid);
        v.time_to_complete = v.remaining_distance / mean;
      }
    }
  }
}

/// World at t = 0 with `count` vehicles on uniformly drawn (edge, direction)
/// slots. Each vehicle's remaining distance is uniform over the edge, i.e. its
/// residual free-flow time is uniform in [0, distance / free_flow_speed).
inline WorldState seed_vehicles(RoadGraph graph, std::size_t count, const SimulationConfig& config, std::uint64_t seed) {
  config.validate();
  if (count > 0 && graph.edge_count() == 0) throw Error(ErrorCode::EmptyGraph, "cannot place vehicles without edges");
  WorldState world;
  world.graph = std::move(graph);
  world.config = config;
  world.rng.seed(seed);
  world.open = detail::resolve_open_nodes(world.graph, config);
  for (std::size_t id = 0; id < world.graph.edge_count(); ++id) {
    auto& e = world.graph.edge(static_cast<EdgeId>(id));
    e.vehicle_forward_list.clear();
    e.vehicle_backward_list.clear();
  }

  std::uniform_int_distribution<std::size_t> pick_edge(0, world.graph.edge_count() == 0 ? 0 : world.graph.edge_count() - 1);
  std::bernoulli_distribution pick_backward(0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  world.vehicles.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& e = world.graph.edge(static_cast<EdgeId>(pick_edge(world.rng)));
    VehicleRecord v;
    v.id = world.next_vehicle_id++;
    v.edge_id = e.id;
    v.direction = pick_backward(world.rng) ? Direction::Backward : Direction::Forward;
    v.thickness = config.vehicle_thickness;
    v.max_speed = config.vehicle_max_speed;
    v.state = VehicleState::OnEdge;
    v.remaining_distance = unit(world.rng) * e.distance;
    e.vehicles(v.direction).push_back(v.id);
    world.vehicles.push_back(v);
  }
  refresh_traffic(world);
  return world;
}

/// Advances `world` by one tick. Events are appended to `events` when given.
///
/// Order within a tick: vehicles move at their current speed; those reaching
/// the end of their edge choose the next edge (or exit at open nodes); external
/// arrivals are drawn at every open node with at least one incident edge and
/// dispatched onto an edge; exited vehicles are dropped; the clock advances and
/// edge conditions are recomputed.
inline TickReport advance(WorldState& world, std::vector<Event>* events = nullptr) {
  const auto& cfg = world.config;
  const Timestamp now = world.clock;
  const double dt = static_cast<double>(cfg.tick);
  TickReport report{now, world.vehicles.size(), 0, 0, 0};
  const auto log = [&](EventKind kind, VehicleId v, std::int64_t where) {
    if (events) events->push_back({now, kind, v, where});
  };

  std::vector<std::pair<VehicleId, NodeId>> reached;
  for (auto& v : world.vehicles) {
    if (v.state != VehicleState::OnEdge) continue;
    v.remaining_distance -= v.current_speed * dt;
    if (v.remaining_distance > 0.0) {
      log(EventKind::Move, v.id, v.edge_id);
      continue;
    }
    auto& e = world.graph.edge(v.edge_id);
    auto& list = e.vehicles(v.direction);
    list.erase(std::ranges::find(list, v.id));
    const NodeId node = e.target(v.direction);
    v.state = VehicleState::AtNode;
    v.remaining_distance = 0.0;
    v.time_to_complete = 0.0;
    reached.emplace_back(v.id, node);
    log(EventKind::NodeArrival, v.id, node);
  }

  ChoiceOptions options{cfg.thresholds, cfg.choice_mode, cfg.choice_floor, false};
  for (const auto& [vid, node] : reached) {
    options.allow_exit = world.is_open(node);
    const EdgeId next = select_next_edge(world.graph, node, options, world.rng);
    auto& v = world.vehicle(vid);
    if (next == kExit) {
      v.state = VehicleState::Exited;
      v.edge_id = kExit;
      v.current_speed = 0.0;
      ++report.exits;
      log(EventKind::Exit, vid, node);
    } else {
      detail::enter_edge(world, v, node, next);
      log(EventKind::EdgeEnter, vid, next);
    }
  }

  options.allow_exit = false;
  for (std::size_t n = 0; n < world.graph.node_count(); ++n) {
    const auto node = static_cast<NodeId>(n);
    if (!world.is_open(node) || world.graph.node(node).edge_connections.empty()) continue;
    const auto count = sample_external_arrivals(world.graph.node(node), world.rng, cfg.mean_chaining);
    for (std::int64_t k = 0; k < count; ++k) {
      VehicleRecord v;
      v.id = world.next_vehicle_id++;
      v.thickness = cfg.vehicle_thickness;
      v.max_speed = cfg.vehicle_max_speed;
      log(EventKind::ExternalArrival, v.id, node);
      const EdgeId next = select_next_edge(world.graph, node, options, world.rng);
      // New ids are the largest, so appending keeps `vehicles` sorted.
      world.vehicles.push_back(v);
      detail::enter_edge(world, world.vehicles.back(), node, next);
      log(EventKind::EdgeEnter, v.id, next);
      ++report.arrivals;
    }
  }

  std::erase_if(world.vehicles, [](const VehicleRecord& v) { return v.state == VehicleState::Exited; });
  world.clock += cfg.tick;
  refresh_traffic(world);
  report.vehicles_after = world.vehicles.size();
  return report;
}

/// Value form of `advance`: returns the successor state.
inline WorldState step(WorldState world, std::vector<Event>* events = nullptr) {
  advance(world, events);
  return world;
}

/// Empty string when the world satisfies its structural invariants, otherwise
/// a description of the first violation.
inline std::string check_world(const WorldState& world) {
  std::vector<int> seen_on_edge(world.vehicles.size(), 0);
  for (std::size_t i = 0; i < world.vehicles.size(); ++i) {
    const auto& v = world.vehicles[i];
    if (i > 0 && world.vehicles[i - 1].id >= v.id) return "vehicles not sorted by id";
    if (v.state != VehicleState::OnEdge) return "vehicle " + std::to_string(v.id) + " is not on an edge between ticks";
    if (v.edge_id < 0 || static_cast<std::size_t>(v.edge_id) >= world.graph.edge_count()) {
      return "vehicle " + std::to_string(v.id) + " on unknown edge";
    }
    const auto& e = world.graph.edge(v.edge_id);
    if (v.current_speed < 0.0 || v.current_speed > v.max_speed) return "vehicle speed out of range";
    if (v.current_speed < e.jam_speed - 1e-12 || v.current_speed > e.free_flow_speed + 1e-12) {
      return "vehicle " + std::to_string(v.id) + " speed outside [jam, free flow]";
    }
    if (v.time_to_complete < 0.0) return "negative time_to_complete";
  }
  for (const auto& e : world.graph.edges()) {
    for (Direction d : {Direction::Forward, Direction::Backward}) {
      for (VehicleId vid : e.vehicles(d)) {
        const auto it = std::ranges::lower_bound(world.vehicles, vid, {}, &VehicleRecord::id);
        if (it == world.vehicles.end() || it->id != vid) return "edge lists unknown vehicle " + std::to_string(vid);
        if (it->edge_id != e.id || it->direction != d) return "vehicle " + std::to_string(vid) + " listed on wrong edge";
        ++seen_on_edge[static_cast<std::size_t>(it - world.vehicles.begin())];
      }
      if (e.traffic(d) < 0.0) return "negative traffic";
      if (!(e.travel_time(d) > 0.0) || !std::isfinite(e.travel_time(d))) return "bad travel time";
    }
  }
  for (std::size_t i = 0; i < seen_on_edge.size(); ++i) {
    if (seen_on_edge[i] != 1) {
      return "vehicle " + std::to_string(world.vehicles[i].id) + " appears " + std::to_string(seen_on_edge[i]) +
             " times in edge lists";
    }
  }
  return {};
}

}  // namespace dynroute
