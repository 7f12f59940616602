#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dynroute/error.hpp"
#include "dynroute/types.hpp"

namespace dynroute {

/// Density thresholds separating free flow (< alpha), normal flow and jam (> beta).
struct Thresholds {
  double alpha = 0.3;
  double beta = 0.7;

  void validate() const {
    if (!(alpha > 0.0) || !(alpha < beta) || !std::isfinite(beta)) {
      throw Error(ErrorCode::InvalidThresholds,
                  "need 0 < alpha < beta, got alpha=" + std::to_string(alpha) + " beta=" + std::to_string(beta));
    }
  }

  bool operator==(const Thresholds&) const = default;
};

enum class SpeedModel : std::uint8_t {
  /// Linear in density up to alpha, free flow between alpha and beta, jam above beta.
  Banded,
  /// Linear in density all the way to beta, jam above.
  Monotone,
};

/// Width-normalised density of one direction of an edge:
/// (sum of vehicle thickness / edge length) * edge thickness.
///
/// `vehicles` must be exactly the vehicles listed on that direction.
inline double edge_density(const EdgeRecord& edge, Direction direction, std::span<const VehicleRecord> vehicles) {
  const auto& listed = edge.vehicles(direction);
  if (vehicles.size() != listed.size()) {
    throw Error(ErrorCode::InconsistentMembership,
                "edge " + std::to_string(edge.id) + " lists " + std::to_string(listed.size()) + " vehicles, got " +
                    std::to_string(vehicles.size()));
  }
  double total_thickness = 0.0;
  std::vector<VehicleId> given;
  given.reserve(vehicles.size());
  for (const auto& v : vehicles) {
    if (v.edge_id != edge.id || v.direction != direction || v.state != VehicleState::OnEdge) {
      throw Error(ErrorCode::InconsistentMembership,
                  "vehicle " + std::to_string(v.id) + " is not on edge " + std::to_string(edge.id) + " " +
                      std::string(to_string(direction)));
    }
    given.push_back(v.id);
    total_thickness += v.thickness;
  }
  std::vector<VehicleId> expected(listed.begin(), listed.end());
  std::ranges::sort(given);
  std::ranges::sort(expected);
  if (given != expected) {
    throw Error(ErrorCode::InconsistentMembership,
                "vehicle set differs from the list of edge " + std::to_string(edge.id));
  }
  return total_thickness / edge.distance * edge.thickness;
}

/// Speed of a vehicle on `edge` at the given normalised density, clamped to
/// [jam_speed, free_flow_speed].
inline double vehicle_speed(double density, const EdgeRecord& edge, const Thresholds& thresholds,
                            SpeedModel model = SpeedModel::Banded) {
  thresholds.validate();
  if (!(density >= 0.0)) throw Error(ErrorCode::InvalidArgument, "density must be >= 0");
  const auto linear = [&] {
    return (edge.free_flow_speed - edge.jam_speed) * (1.0 - density) + edge.jam_speed;
  };
  double speed = edge.free_flow_speed;
  if (model == SpeedModel::Monotone) {
    speed = density > thresholds.beta ? edge.jam_speed : linear();
  } else if (density < thresholds.beta && density <= thresholds.alpha) {
    speed = linear();
  } else if (density > thresholds.beta) {
    speed = edge.jam_speed;
  }
  return std::clamp(speed, edge.jam_speed, edge.free_flow_speed);
}

/// Space-mean speed of one edge direction; an empty edge runs at free flow.
inline double edge_average_speed(const EdgeRecord& edge, std::span<const double> vehicle_speeds) {
  if (vehicle_speeds.empty()) return edge.free_flow_speed;
  double sum = 0.0;
  for (double s : vehicle_speeds) sum += s;
  return sum / static_cast<double>(vehicle_speeds.size());
}

inline double edge_travel_time(const EdgeRecord& edge, double mean_speed) {
  if (!(mean_speed > 0.0)) {
    throw Error(ErrorCode::ZeroSpeed, "edge " + std::to_string(edge.id) + " has non-positive mean speed");
  }
  return edge.distance / mean_speed;
}

}  // namespace dynroute
