#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dynroute/error.hpp"
#include "dynroute/graph.hpp"
#include "dynroute/io.hpp"
#include "dynroute/network.hpp"
#include "dynroute/prediction.hpp"
#include "dynroute/routing.hpp"
#include "dynroute/simulation.hpp"
#include "dynroute/timeline.hpp"

namespace dynroute {

/// Static route vs forward-looking route for one origin-destination pair.
///
/// `static_time` (T) is the statically chosen path driven through the dynamic
/// timeline from t = 0; `dynamic_time` (tau) is the dynamic route's arrival
/// label. `static_cost_t0` is what the static search itself believed the path
/// costs, reported alongside for transparency.
struct ComparisonRecord {
  NodeId source = 0;
  NodeId destination = 0;
  double static_time = 0.0;
  double dynamic_time = 0.0;
  double delta = 0.0;
  double static_cost_t0 = 0.0;

  bool operator==(const ComparisonRecord&) const = default;
};

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  bool operator==(const SweepCell&) const = default;
};

using NodePair = std::pair<NodeId, NodeId>;

/// Mean of T - tau over the records.
inline double average_difference(std::span<const ComparisonRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no comparison records");
  double sum = 0.0;
  for (const auto& r : records) sum += r.delta;
  return sum / static_cast<double>(records.size());
}

inline ComparisonRecord compare_pair(const WeightTimeline& timeline, NodeId source, NodeId destination) {
  const auto t0 = timeline.weights_at(0.0);
  const auto baseline = static_dijkstra(t0, source, destination);
  const auto dynamic = dynamic_dijkstra(timeline, source, destination);
  ComparisonRecord rec;
  rec.source = source;
  rec.destination = destination;
  rec.static_time = experienced_time(timeline, baseline.path, 0.0);
  rec.dynamic_time = dynamic.total_time;
  rec.delta = rec.static_time - rec.dynamic_time;
  rec.static_cost_t0 = baseline.total_time;
  return rec;
}

struct CompareResult {
  std::vector<ComparisonRecord> records;
  std::vector<std::pair<NodePair, std::string>> skipped;
};

/// Compares every pair; unroutable pairs are skipped with their reason.
inline CompareResult compare_pairs(const WeightTimeline& timeline, std::span<const NodePair> pairs) {
  CompareResult out;
  out.records.reserve(pairs.size());
  for (const auto& [s, d] : pairs) {
    try {
      out.records.push_back(compare_pair(timeline, s, d));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unreachable) throw;
      out.skipped.emplace_back(NodePair{s, d}, e.what());
    }
  }
  return out;
}

/// `count` ordered pairs (source != destination), uniform over pairs joined by
/// a route in `graph`. Drawn with replacement from a generator seeded by `seed`.
inline std::vector<NodePair> sample_pairs(const RoadGraph& graph, std::size_t count, std::uint64_t seed) {
  std::vector<NodePair> pairs;
  if (count == 0) return pairs;
  std::vector<int> component(graph.node_count(), -1);
  int components = 0;
  for (std::size_t n = 0; n < graph.node_count(); ++n) {
    if (component[n] >= 0) continue;
    for (NodeId v : graph.reachable_from(static_cast<NodeId>(n))) component[static_cast<std::size_t>(v)] = components;
    ++components;
  }
  std::vector<std::size_t> size_of(static_cast<std::size_t>(components), 0);
  for (int c : component) ++size_of[static_cast<std::size_t>(c)];
  if (std::ranges::none_of(size_of, [](std::size_t s) { return s >= 2; })) {
    throw Error(ErrorCode::EmptyInput, "graph has no routable node pair");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(graph.node_count() - 1));
  while (pairs.size() < count) {
    const NodeId s = pick(rng);
    const NodeId d = pick(rng);
    if (s == d || component[static_cast<std::size_t>(s)] != component[static_cast<std::size_t>(d)]) continue;
    pairs.emplace_back(s, d);
  }
  return pairs;
}

// -- experiment configuration -------------------------------------------------

/// Where the experiment graph comes from: node/edge files, or a generated grid.
struct GraphSource {
  std::string nodes_path;
  std::string edges_path;
  GridNetworkSpec grid;
  std::optional<std::pair<std::size_t, std::size_t>> subset = std::pair<std::size_t, std::size_t>{80, 150};
};

struct ExperimentConfig {
  SimulationConfig simulation;
  CategoryTable categories = default_categories();
  GraphSource graph;
  std::size_t vehicles = 200;
  Timestamp horizon = 900;
  std::size_t pairs = 1000;
  std::uint64_t seed = 7;
  std::vector<double> sweep_alphas{0.2, 0.3, 0.4};
  std::vector<double> sweep_betas{0.6, 0.7, 0.8};
};

namespace detail {

inline ChoiceMode parse_choice_mode(const std::string& s) {
  if (s == "proportional") return ChoiceMode::Proportional;
  if (s == "inverse") return ChoiceMode::Inverse;
  throw Error(ErrorCode::InvalidConfig, "choice_mode must be 'proportional' or 'inverse'");
}

inline SpeedModel parse_speed_model(const std::string& s) {
  if (s == "banded") return SpeedModel::Banded;
  if (s == "monotone") return SpeedModel::Monotone;
  throw Error(ErrorCode::InvalidConfig, "speed_model must be 'banded' or 'monotone'");
}

}  // namespace detail

/// Reads a JSON experiment config. Every key is optional; unknown keys are
/// rejected. Relative file paths are resolved against `base_dir`.
///
///   tick, vehicles, horizon, pairs, seed, alpha, beta, choice_mode
///   ("proportional" | "inverse"), speed_model ("banded" | "monotone"),
///   open_nodes ("all" | "none" | "leaves" | [ids]), mean_chaining,
///   vehicle_thickness, vehicle_max_speed, choice_floor,
///   categories (object or path to one), nodes, edges (paths),
///   grid {rows, cols, seed, diagonal_probability, sigma_min, sigma_max},
///   subset {nodes, edges} or null, sweep {alpha: [..], beta: [..]}
inline ExperimentConfig parse_experiment_config(const nlohmann::json& doc, const std::string& base_dir = ".") {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  ExperimentConfig cfg;
  const auto resolve = [&](const std::string& p) {
    return (p.empty() || p.front() == '/' || base_dir.empty()) ? p : base_dir + "/" + p;
  };
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "tick") cfg.simulation.tick = value.get<Timestamp>();
      else if (key == "vehicles") cfg.vehicles = value.get<std::size_t>();
      else if (key == "horizon") cfg.horizon = value.get<Timestamp>();
      else if (key == "pairs") cfg.pairs = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "alpha") cfg.simulation.thresholds.alpha = value.get<double>();
      else if (key == "beta") cfg.simulation.thresholds.beta = value.get<double>();
      else if (key == "choice_mode") cfg.simulation.choice_mode = detail::parse_choice_mode(value.get<std::string>());
      else if (key == "speed_model") cfg.simulation.speed_model = detail::parse_speed_model(value.get<std::string>());
      else if (key == "mean_chaining") cfg.simulation.mean_chaining = value.get<bool>();
      else if (key == "vehicle_thickness") cfg.simulation.vehicle_thickness = value.get<double>();
      else if (key == "vehicle_max_speed") cfg.simulation.vehicle_max_speed = value.get<double>();
      else if (key == "choice_floor") cfg.simulation.choice_floor = value.get<double>();
      else if (key == "open_nodes") {
        if (value.is_array()) {
          cfg.simulation.open_policy = OpenNodePolicy::Listed;
          cfg.simulation.open_nodes = value.get<std::vector<NodeId>>();
        } else {
          const auto s = value.get<std::string>();
          if (s == "all") cfg.simulation.open_policy = OpenNodePolicy::All;
          else if (s == "none") cfg.simulation.open_policy = OpenNodePolicy::None;
          else if (s == "leaves") cfg.simulation.open_policy = OpenNodePolicy::Leaves;
          else throw Error(ErrorCode::InvalidConfig, "open_nodes must be all, none, leaves or a list of ids");
        }
      } else if (key == "categories") {
        cfg.categories = value.is_string() ? io::load_categories(resolve(value.get<std::string>()))
                                           : io::parse_categories(value);
      } else if (key == "nodes") cfg.graph.nodes_path = resolve(value.get<std::string>());
      else if (key == "edges") cfg.graph.edges_path = resolve(value.get<std::string>());
      else if (key == "grid") {
        auto& g = cfg.graph.grid;
        g.rows = value.value("rows", g.rows);
        g.cols = value.value("cols", g.cols);
        g.seed = value.value("seed", g.seed);
        g.diagonal_probability = value.value("diagonal_probability", g.diagonal_probability);
        g.sigma_min = value.value("sigma_min", g.sigma_min);
        g.sigma_max = value.value("sigma_max", g.sigma_max);
      } else if (key == "subset") {
        if (value.is_null()) cfg.graph.subset.reset();
        else cfg.graph.subset = std::pair{value.at("nodes").get<std::size_t>(), value.at("edges").get<std::size_t>()};
      } else if (key == "sweep") {
        cfg.sweep_alphas = value.at("alpha").get<std::vector<double>>();
        cfg.sweep_betas = value.at("beta").get<std::vector<double>>();
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  if (cfg.horizon < 0) throw Error(ErrorCode::InvalidConfig, "horizon must be >= 0");
  if (cfg.graph.nodes_path.empty() != cfg.graph.edges_path.empty()) {
    throw Error(ErrorCode::InvalidConfig, "nodes and edges files must be given together");
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  auto in = io::detail::open_input(path);
  const auto slash = path.find_last_of('/');
  const auto dir = slash == std::string::npos ? std::string(".") : path.substr(0, slash);
  try {
    return parse_experiment_config(nlohmann::json::parse(in), dir);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
}

/// Loads or generates the configured network, then applies the subset.
inline RoadGraph build_experiment_graph(const ExperimentConfig& cfg) {
  RoadGraph full = cfg.graph.nodes_path.empty()
                       ? make_grid_network(cfg.graph.grid, cfg.categories)
                       : io::load_graph(cfg.graph.nodes_path, cfg.graph.edges_path, cfg.categories);
  if (!cfg.graph.subset) return full;
  return subset_graph(full, cfg.graph.subset->first, cfg.graph.subset->second, cfg.seed);
}

/// Seeded initial world -> predicted timeline, for one set of thresholds.
inline WeightTimeline predict_for(const RoadGraph& graph, const ExperimentConfig& cfg, const Thresholds& thresholds) {
  auto sim = cfg.simulation;
  sim.thresholds = thresholds;
  const auto world = seed_vehicles(graph, cfg.vehicles, sim, cfg.seed);
  return predict_timeline(world, cfg.horizon);
}

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<std::pair<Thresholds, std::string>> rejected;
};

/// Average difference over the (alpha, beta) grid. Every cell restarts from the
/// same seeded world and scores the same pair set; cells with invalid
/// thresholds are rejected. Throws InvalidThresholds when no cell is valid.
inline SweepResult alpha_beta_sweep(const RoadGraph& graph, const ExperimentConfig& cfg) {
  SweepResult out;
  const auto pairs = sample_pairs(graph, cfg.pairs, cfg.seed);
  for (double alpha : cfg.sweep_alphas) {
    for (double beta : cfg.sweep_betas) {
      const Thresholds th{alpha, beta};
      try {
        th.validate();
      } catch (const Error& e) {
        out.rejected.emplace_back(th, e.what());
        continue;
      }
      const auto timeline = predict_for(graph, cfg, th);
      const auto result = compare_pairs(timeline, pairs);
      if (result.records.empty()) {
        out.rejected.emplace_back(th, "no routable pairs");
        continue;
      }
      out.cells.push_back({alpha, beta, average_difference(result.records), result.records.size(), cfg.seed});
    }
  }
  if (out.cells.empty()) throw Error(ErrorCode::InvalidThresholds, "every sweep cell was rejected");
  return out;
}

}  // namespace dynroute
