// dynroute: traffic prediction and forward-looking route planning.
//
//   dynroute generate      --rows R --cols C --out DIR
//   dynroute simulate      [graph] --ticks N --out DIR
//   dynroute predict       [graph] --horizon H --out DIR
//   dynroute route         --timeline FILE --from S --to D [--static]
//   dynroute compare       (--timeline FILE | [graph]) [--pairs FILE | --count N] --out DIR
//   dynroute sweep         --config FILE --out DIR
//   dynroute replay-table4
//
// [graph] is --nodes/--edges (plus --categories), or a generated grid when
// omitted; --subset-nodes/--subset-edges trims it. Global flags: --seed,
// --config, --format {csv,json,dot}, --out DIR.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "dynroute/dynroute.hpp"

namespace fs = std::filesystem;
using namespace dynroute;

namespace {

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string format = "csv";
  std::string out_dir = ".";
};

struct GraphOptions {
  std::string nodes;
  std::string edges;
  std::string categories;
  std::optional<std::size_t> subset_nodes;
  std::optional<std::size_t> subset_edges;
  bool no_subset = false;
  std::optional<std::size_t> rows;
  std::optional<std::size_t> cols;
  std::optional<std::size_t> vehicles;
  std::string open;
};

void add_graph_options(CLI::App* cmd, GraphOptions& g) {
  cmd->add_option("--nodes", g.nodes, "Nodes CSV (id,lat,lon,category[,mu,sigma])");
  cmd->add_option("--edges", g.edges, "Edges CSV (id,start,end,distance,category)");
  cmd->add_option("--categories", g.categories, "Category table JSON");
  cmd->add_option("--subset-nodes", g.subset_nodes, "Connected subset node count");
  cmd->add_option("--subset-edges", g.subset_edges, "Connected subset edge budget");
  cmd->add_flag("--no-subset", g.no_subset, "Use the whole graph");
  cmd->add_option("--rows", g.rows, "Generated grid rows (when no files are given)");
  cmd->add_option("--cols", g.cols, "Generated grid columns (when no files are given)");
  cmd->add_option("--vehicles", g.vehicles, "Initial vehicle count");
  cmd->add_option("--open", g.open, "Open nodes: all, none or leaves")->check(CLI::IsMember({"all", "none", "leaves"}));
}

ExperimentConfig resolve_config(const GlobalOptions& global, const GraphOptions& g) {
  ExperimentConfig cfg = global.config_path.empty() ? ExperimentConfig{} : load_experiment_config(global.config_path);
  if (global.seed) cfg.seed = *global.seed;
  if (!g.categories.empty()) cfg.categories = io::load_categories(g.categories);
  if (!g.nodes.empty() || !g.edges.empty()) {
    if (g.nodes.empty() || g.edges.empty()) throw Error(ErrorCode::InvalidConfig, "--nodes and --edges go together");
    cfg.graph.nodes_path = g.nodes;
    cfg.graph.edges_path = g.edges;
  }
  if (g.rows) cfg.graph.grid.rows = *g.rows;
  if (g.cols) cfg.graph.grid.cols = *g.cols;
  if (g.no_subset) cfg.graph.subset.reset();
  if (g.subset_nodes || g.subset_edges) {
    const auto base = cfg.graph.subset.value_or(std::pair<std::size_t, std::size_t>{80, 150});
    cfg.graph.subset = std::pair{g.subset_nodes.value_or(base.first), g.subset_edges.value_or(base.second)};
  }
  if (g.vehicles) cfg.vehicles = *g.vehicles;
  if (g.open == "all") cfg.simulation.open_policy = OpenNodePolicy::All;
  if (g.open == "none") cfg.simulation.open_policy = OpenNodePolicy::None;
  if (g.open == "leaves") cfg.simulation.open_policy = OpenNodePolicy::Leaves;
  return cfg;
}

std::string out_path(const GlobalOptions& global, const std::string& name) {
  fs::create_directories(global.out_dir);
  return (fs::path(global.out_dir) / name).string();
}

void check_format(const GlobalOptions& global, std::initializer_list<std::string_view> allowed) {
  for (auto f : allowed) {
    if (global.format == f) return;
  }
  throw CLI::ValidationError("--format", "'" + global.format + "' is not supported by this command");
}

// -- subcommands ---------------------------------------------------------------

int run_generate(const GlobalOptions& global, const GridNetworkSpec& spec) {
  const auto graph = make_grid_network(spec);
  std::ostringstream nodes, edges;
  io::write_nodes(nodes, graph.nodes());
  io::write_edges(edges, graph.edges());
  io::save_text(out_path(global, "nodes.csv"), nodes.str());
  io::save_text(out_path(global, "edges.csv"), edges.str());
  std::cout << fmt::format("wrote {} nodes, {} edges to {}\n", graph.node_count(), graph.edge_count(), global.out_dir);
  return 0;
}

int run_simulate(const GlobalOptions& global, const GraphOptions& g, std::optional<Timestamp> ticks,
                 const std::vector<Timestamp>& dot_ticks) {
  check_format(global, {"csv", "json", "dot"});
  const auto cfg = resolve_config(global, g);
  const Timestamp steps = ticks.value_or(cfg.horizon);
  auto world = seed_vehicles(build_experiment_graph(cfg), cfg.vehicles, cfg.simulation, cfg.seed);

  std::vector<Event> events;
  std::ostringstream snapshots;
  auto snapshot_doc = nlohmann::json::array();
  report::write_snapshot_header(snapshots);
  std::size_t arrivals = 0, exits = 0;
  const auto capture = [&] {
    if (global.format == "json") {
      for (auto& row : report::snapshot_json(world.clock, world.graph)) snapshot_doc.push_back(std::move(row));
    } else {
      report::write_snapshot_rows(snapshots, world.clock, world.graph);
    }
    const bool want_dot = std::ranges::find(dot_ticks, world.clock) != dot_ticks.end() ||
                          (global.format == "dot" && world.clock == steps);
    if (want_dot) {
      io::save_text(out_path(global, fmt::format("snapshot_t{}.dot", world.clock)), report::to_dot(world.graph, world.clock));
    }
  };
  capture();
  for (Timestamp t = 0; t < steps; t += cfg.simulation.tick) {
    const auto rep = advance(world, &events);
    arrivals += rep.arrivals;
    exits += rep.exits;
    capture();
  }

  std::ostringstream log;
  report::write_events(log, events);
  io::save_text(out_path(global, "events.log"), log.str());
  if (global.format == "json") {
    io::save_text(out_path(global, "snapshots.json"), snapshot_doc.dump(2) + "\n");
  } else {
    io::save_text(out_path(global, "snapshots.csv"), snapshots.str());
  }
  std::cout << fmt::format("simulated {} s: {} vehicles at end, {} arrivals, {} exits, {} events\n", world.clock,
                           world.vehicle_count(), arrivals, exits, events.size());
  return 0;
}

int run_predict(const GlobalOptions& global, const GraphOptions& g, std::optional<Timestamp> horizon) {
  check_format(global, {"csv", "json"});
  auto cfg = resolve_config(global, g);
  if (horizon) cfg.horizon = *horizon;
  const auto graph = build_experiment_graph(cfg);
  const auto world = seed_vehicles(graph, cfg.vehicles, cfg.simulation, cfg.seed);

  std::ostringstream aggregates;
  auto aggregate_doc = nlohmann::json::array();
  report::write_aggregate_header(aggregates);
  const auto timeline = predict_timeline(world, cfg.horizon, [&](Timestamp t, const WorldState& w) {
    const auto rows = compute_aggregates(w);
    if (global.format == "json") {
      for (const auto& a : rows) {
        aggregate_doc.push_back({{"tick", t}, {"edge_id", a.edge_id}, {"dir", to_string(a.direction)},
                                 {"k", a.density}, {"u", a.mean_speed}, {"q", a.flow}, {"tt", a.travel_time}});
      }
    } else {
      report::write_aggregate_rows(aggregates, t, rows);
    }
  });

  std::ostringstream doc;
  io::write_timeline(doc, timeline);
  io::save_text(out_path(global, "timeline.txt"), doc.str());
  if (global.format == "json") {
    io::save_text(out_path(global, "aggregates.json"), aggregate_doc.dump(2) + "\n");
  } else {
    io::save_text(out_path(global, "aggregates.csv"), aggregates.str());
  }
  std::ostringstream nodes, edges;
  io::write_nodes(nodes, graph.nodes());
  io::write_edges(edges, graph.edges());
  io::save_text(out_path(global, "graph_nodes.csv"), nodes.str());
  io::save_text(out_path(global, "graph_edges.csv"), edges.str());
  std::cout << fmt::format("predicted {} timestamps over {} nodes / {} edges -> {}\n", timeline.timestamps().size(),
                           graph.node_count(), graph.edge_count(), global.out_dir);
  return 0;
}

int run_route(const GlobalOptions& global, const std::string& timeline_path, NodeId from, NodeId to, bool use_static) {
  check_format(global, {"csv", "json"});
  const auto timeline = io::load_timeline(timeline_path);
  const auto result = use_static ? static_dijkstra(timeline.weights_at(0.0), from, to)
                                 : dynamic_dijkstra(timeline, from, to);
  if (global.format == "json") {
    std::cout << report::route_json(result).dump(2) << '\n';
  } else {
    std::cout << report::route_text(result);
  }
  if (global.out_dir != ".") io::save_text(out_path(global, "route.json"), report::route_json(result).dump(2) + "\n");
  return 0;
}

std::vector<NodePair> load_pairs(const std::string& path) {
  auto in = io::detail::open_input(path);
  std::vector<NodePair> pairs;
  io::detail::for_each_csv_row(in, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 2) throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected src,dst");
    pairs.emplace_back(io::detail::field<NodeId>(f[0], line_no, "src"), io::detail::field<NodeId>(f[1], line_no, "dst"));
  });
  return pairs;
}

int run_compare(const GlobalOptions& global, const GraphOptions& g, const std::string& timeline_path,
                const std::string& pairs_path, std::optional<std::size_t> count) {
  check_format(global, {"csv", "json"});
  const auto cfg = resolve_config(global, g);
  WeightTimeline timeline;
  std::optional<RoadGraph> graph;
  if (!timeline_path.empty()) {
    timeline = io::load_timeline(timeline_path);
  } else {
    graph = build_experiment_graph(cfg);
    timeline = predict_for(*graph, cfg, cfg.simulation.thresholds);
  }

  std::vector<NodePair> pairs;
  if (!pairs_path.empty()) {
    pairs = load_pairs(pairs_path);
  } else {
    if (!graph) {
      // Topology of a loaded timeline, as a graph for pair sampling.
      std::vector<NodeRecord> nodes(timeline.node_count());
      for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].id = static_cast<NodeId>(i);
      std::vector<EdgeRecord> edges;
      for (const auto& a : timeline.arcs()) {
        if (a.from > a.to && timeline.arc_index(a.to, a.from)) continue;
        EdgeRecord e;
        e.id = static_cast<EdgeId>(edges.size());
        e.start_node = a.from;
        e.end_node = a.to;
        e.distance = e.thickness = e.free_flow_speed = 2.0;
        e.jam_speed = 1.0;
        edges.push_back(e);
      }
      graph = build_graph(std::move(nodes), std::move(edges));
    }
    pairs = sample_pairs(*graph, count.value_or(cfg.pairs), cfg.seed);
  }

  const auto result = compare_pairs(timeline, pairs);
  for (const auto& [pair, why] : result.skipped) {
    std::cerr << fmt::format("skipped {} -> {}: {}\n", pair.first, pair.second, why);
  }
  if (global.format == "json") {
    io::save_text(out_path(global, "comparisons.json"), report::comparisons_json(result.records).dump(2) + "\n");
  } else {
    std::ostringstream csv;
    report::write_comparisons_csv(csv, result.records);
    io::save_text(out_path(global, "comparisons.csv"), csv.str());
  }
  const double lambda = average_difference(result.records);
  std::size_t negative = 0;
  for (const auto& r : result.records) negative += r.delta < 0.0;
  std::cout << fmt::format("pairs: {}  skipped: {}  lambda: {}  pairs with delta < 0: {}\n", result.records.size(),
                           result.skipped.size(), io::format_number(lambda), negative);
  return 0;
}

int run_sweep(const GlobalOptions& global, const GraphOptions& g) {
  check_format(global, {"csv", "json"});
  const auto cfg = resolve_config(global, g);
  const auto graph = build_experiment_graph(cfg);
  const auto result = alpha_beta_sweep(graph, cfg);
  for (const auto& [th, why] : result.rejected) {
    std::cerr << fmt::format("rejected alpha={} beta={}: {}\n", th.alpha, th.beta, why);
  }
  if (global.format == "json") {
    io::save_text(out_path(global, "sweep.json"), report::sweep_json(result.cells).dump(2) + "\n");
  } else {
    std::ostringstream csv;
    report::write_sweep_csv(csv, result.cells);
    io::save_text(out_path(global, "sweep.csv"), csv.str());
  }
  std::ostringstream table;
  report::write_sweep_csv(table, result.cells);
  std::cout << table.str();
  return 0;
}

int run_replay_example(const GlobalOptions& global) {
  check_format(global, {"csv", "json"});
  const auto timeline = scenarios::ten_node_timeline();
  const auto dynamic = dynamic_dijkstra(timeline, 0, 9);
  const auto baseline = static_dijkstra(timeline.weights_at(0.0), 0, 9);
  const auto cmp = compare_pair(timeline, 0, 9);
  if (global.format == "json") {
    nlohmann::json doc{{"dynamic", report::route_json(dynamic)},
                       {"static", report::route_json(baseline)},
                       {"static_experienced", cmp.static_time}};
    std::cout << doc.dump(2) << '\n';
    return 0;
  }
  std::cout << "dynamic route (0 -> 9)\n" << report::route_text(dynamic);
  std::cout << "\nstatic route at t=0 (0 -> 9)\n" << report::route_text(baseline);
  std::cout << "static route driven through the timeline: " << io::format_number(cmp.static_time) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traffic prediction and forward-looking route planning"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every stochastic choice");
  app.add_option("--config", global.config_path, "Experiment config (JSON)");
  app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"csv", "json", "dot"}));
  app.add_option("--out", global.out_dir, "Output directory");

  GridNetworkSpec grid;
  auto* generate = app.add_subcommand("generate", "Write a synthetic street-grid network");
  generate->add_option("--rows", grid.rows);
  generate->add_option("--cols", grid.cols);
  generate->add_option("--grid-seed", grid.seed);
  generate->add_option("--diagonals", grid.diagonal_probability);

  GraphOptions graph_opts;
  std::optional<Timestamp> ticks;
  std::vector<Timestamp> dot_ticks;
  auto* simulate = app.add_subcommand("simulate", "Run the traffic simulation, writing events and snapshots");
  add_graph_options(simulate, graph_opts);
  simulate->add_option("--ticks", ticks, "Simulated seconds");
  simulate->add_option("--dot-tick", dot_ticks, "Also write a DOT snapshot at these ticks");

  std::optional<Timestamp> horizon;
  auto* predict = app.add_subcommand("predict", "Predict a travel-time timeline");
  add_graph_options(predict, graph_opts);
  predict->add_option("--horizon", horizon, "Prediction horizon in seconds");

  std::string timeline_path;
  NodeId from = 0, to = 0;
  bool use_static = false;
  auto* route = app.add_subcommand("route", "Route one pair over a timeline file");
  route->add_option("--timeline", timeline_path)->required();
  route->add_option("--from", from)->required();
  route->add_option("--to", to)->required();
  route->add_flag("--static", use_static, "Conventional Dijkstra on the t=0 weights");

  std::string pairs_path;
  std::optional<std::size_t> count;
  auto* compare = app.add_subcommand("compare", "Static vs dynamic route times over many pairs");
  add_graph_options(compare, graph_opts);
  compare->add_option("--timeline", timeline_path, "Timeline file (default: predict one)");
  compare->add_option("--pairs", pairs_path, "CSV of src,dst pairs");
  compare->add_option("--count", count, "Number of random pairs");

  auto* sweep = app.add_subcommand("sweep", "Average difference over an alpha-beta grid");
  add_graph_options(sweep, graph_opts);

  auto* replay = app.add_subcommand("replay-table4", "Route the bundled ten-node example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*generate) return run_generate(global, grid);
    if (*simulate) return run_simulate(global, graph_opts, ticks, dot_ticks);
    if (*predict) return run_predict(global, graph_opts, horizon);
    if (*route) return run_route(global, timeline_path, from, to, use_static);
    if (*compare) return run_compare(global, graph_opts, timeline_path, pairs_path, count);
    if (*sweep) return run_sweep(global, graph_opts);
    if (*replay) return run_replay_example(global);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
