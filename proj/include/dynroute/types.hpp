#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dynroute {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
using VehicleId = std::int64_t;

/// Edge id a vehicle "chooses" when it leaves the network at an open node.
inline constexpr EdgeId kExit = -1;

enum class Direction : std::uint8_t { Forward, Backward };

constexpr std::string_view to_string(Direction d) {
  return d == Direction::Forward ? "fwd" : "bwd";
}

/// Road class parameters looked up by an edge's category name.
struct CategorySpec {
  double thickness = 0.0;        // m
  double free_flow_speed = 0.0;  // m/s
  double jam_speed = 0.0;        // m/s

  bool operator==(const CategorySpec&) const = default;
};

using CategoryTable = std::map<std::string, CategorySpec, std::less<>>;

/// Built-in road classes, used when no category config is supplied.
inline CategoryTable default_categories() {
  return {
      {"arterial", {7.0, 16.7, 2.8}},
      {"collector", {6.0, 13.9, 2.2}},
      {"local", {5.0, 11.1, 1.7}},
  };
}

struct NodeRecord {
  NodeId id = 0;
  double latitude = 0.0;
  double longitude = 0.0;
  std::string category;
  std::vector<NodeId> node_connections;
  std::vector<EdgeId> edge_connections;
  // External traffic: normal(mu, sigma) arrivals per tick.
  double gaussian_mean = 0.0;
  double gaussian_sigma = 1.0;
  std::int64_t external_vehicle_count = 0;

  bool operator==(const NodeRecord&) const = default;
};

struct EdgeRecord {
  EdgeId id = 0;
  NodeId start_node = 0;
  NodeId end_node = 0;
  double distance = 0.0;  // m
  std::string category;
  double thickness = 0.0;        // m
  double free_flow_speed = 0.0;  // m/s
  double jam_speed = 0.0;        // m/s

  // Live traffic state, one slot per direction.
  double forward_traffic = 0.0;
  double backward_traffic = 0.0;
  std::vector<VehicleId> vehicle_forward_list;
  std::vector<VehicleId> vehicle_backward_list;
  double forward_travel_time = 0.0;   // s
  double backward_travel_time = 0.0;  // s

  double free_flow_time() const { return distance / free_flow_speed; }

  NodeId origin(Direction d) const { return d == Direction::Forward ? start_node : end_node; }
  NodeId target(Direction d) const { return d == Direction::Forward ? end_node : start_node; }

  double traffic(Direction d) const {
    return d == Direction::Forward ? forward_traffic : backward_traffic;
  }
  double& traffic(Direction d) {
    return d == Direction::Forward ? forward_traffic : backward_traffic;
  }
  double travel_time(Direction d) const {
    return d == Direction::Forward ? forward_travel_time : backward_travel_time;
  }
  double& travel_time(Direction d) {
    return d == Direction::Forward ? forward_travel_time : backward_travel_time;
  }
  const std::vector<VehicleId>& vehicles(Direction d) const {
    return d == Direction::Forward ? vehicle_forward_list : vehicle_backward_list;
  }
  std::vector<VehicleId>& vehicles(Direction d) {
    return d == Direction::Forward ? vehicle_forward_list : vehicle_backward_list;
  }

  bool operator==(const EdgeRecord&) const = default;
};

enum class VehicleState : std::uint8_t { OnEdge, AtNode, Exited };

struct VehicleRecord {
  VehicleId id = 0;
  EdgeId edge_id = kExit;
  Direction direction = Direction::Forward;
  double thickness = 2.0;   // m
  double max_speed = 36.0;  // m/s
  VehicleState state = VehicleState::AtNode;
  double current_speed = 0.0;       // m/s
  double time_to_complete = 0.0;    // s left on the current edge
  double remaining_distance = 0.0;  // m left on the current edge

  bool operator==(const VehicleRecord&) const = default;
};

}  // namespace dynroute
