#include <random>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"

using namespace dynroute;
using namespace testing_support;

namespace {

ExperimentConfig ten_node_config() {
  auto cfg = load_experiment_config(data_path("ten_node.json"));
  cfg.horizon = 60;
  cfg.pairs = 30;
  return cfg;
}

}  // namespace

TEST(Compare, TenNodeScenarioPair) {
  const auto rec = compare_pair(scenarios::ten_node_timeline(), 0, 9);
  EXPECT_EQ(rec.static_time, 33.0);
  EXPECT_EQ(rec.dynamic_time, 36.0);
  EXPECT_EQ(rec.delta, -3.0);
  EXPECT_EQ(rec.static_cost_t0, 43.0);
}

TEST(Compare, ConstantTimelineHasZeroDelta) {
  std::mt19937_64 rng(55);
  oracle::InstanceSpec spec;
  spec.max_nodes = 10;
  spec.max_keys = 1;
  for (int i = 0; i < 50; ++i) {
    const auto inst = oracle::random_instance(rng, spec);
    const auto rec = compare_pair(oracle::to_timeline(inst), 0, inst.n - 1);
    ASSERT_EQ(rec.delta, 0.0);
    ASSERT_EQ(rec.static_cost_t0, rec.static_time);
  }
}

TEST(Compare, FifoTimelinesNeverFavourStaticRoute) {
  std::mt19937_64 rng(56);
  oracle::InstanceSpec spec;
  spec.max_nodes = 9;
  spec.max_keys = 5;
  spec.fifo = true;
  std::vector<ComparisonRecord> records;
  for (int i = 0; i < 200; ++i) {
    const auto inst = oracle::random_instance(rng, spec);
    records.push_back(compare_pair(oracle::to_timeline(inst), 0, inst.n - 1));
    ASSERT_GE(records.back().delta, 0.0);
  }
  EXPECT_GE(average_difference(records), 0.0);
}

TEST(Compare, SkipsUnreachablePairsOnly) {
  WeightTimeline tl(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
  tl.append(0, {1.0, 1.0, 2.0, 2.0});
  const std::vector<NodePair> pairs{{0, 1}, {0, 3}, {3, 2}};
  const auto result = compare_pairs(tl, pairs);
  ASSERT_EQ(result.records.size(), 2u);
  ASSERT_EQ(result.skipped.size(), 1u);
  EXPECT_EQ(result.skipped[0].first, (NodePair{0, 3}));
  const std::vector<NodePair> bad{{0, 0}};
  EXPECT_ERROR_CODE(ErrorCode::InvalidArgument, compare_pairs(tl, bad));
}

TEST(AverageDifference, MeanOfDeltas) {
  std::vector<ComparisonRecord> r(3);
  r[0].delta = 1.0;
  r[1].delta = -2.0;
  r[2].delta = 7.0;
  EXPECT_DOUBLE_EQ(average_difference(r), 2.0);
  EXPECT_ERROR_CODE(ErrorCode::EmptyInput, average_difference({}));
}

TEST(SamplePairs, DistinctEndpointsInSameComponent) {
  const auto g = build_graph({node(0), node(1), node(2), node(3), node(4)},
                             {edge(0, 0, 1), edge(1, 1, 2), edge(2, 3, 4)});
  const auto pairs = sample_pairs(g, 500, 3);
  ASSERT_EQ(pairs.size(), 500u);
  for (const auto& [s, d] : pairs) {
    ASSERT_NE(s, d);
    ASSERT_EQ(s <= 2, d <= 2);
  }
  EXPECT_EQ(sample_pairs(g, 500, 3), pairs);
  EXPECT_FALSE(sample_pairs(g, 500, 4) == pairs);
  EXPECT_TRUE(sample_pairs(g, 0, 1).empty());
  EXPECT_ERROR_CODE(ErrorCode::EmptyInput, sample_pairs(build_graph({node(0), node(1)}, {}), 3, 1));
}

TEST(Config, DefaultsAndParsing) {
  const auto cfg = parse_experiment_config(nlohmann::json::parse(R"({
    "seed": 9, "vehicles": 12, "horizon": 30, "alpha": 0.2, "beta": 0.6,
    "choice_mode": "inverse", "speed_model": "monotone", "open_nodes": [1, 2],
    "mean_chaining": false, "subset": null, "grid": {"rows": 4, "cols": 3},
    "sweep": {"alpha": [0.1], "beta": [0.5, 0.6]}
  })"));
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.vehicles, 12u);
  EXPECT_EQ(cfg.horizon, 30);
  EXPECT_EQ(cfg.simulation.thresholds, (Thresholds{0.2, 0.6}));
  EXPECT_EQ(cfg.simulation.choice_mode, ChoiceMode::Inverse);
  EXPECT_EQ(cfg.simulation.speed_model, SpeedModel::Monotone);
  EXPECT_EQ(cfg.simulation.open_policy, OpenNodePolicy::Listed);
  EXPECT_EQ(cfg.simulation.open_nodes, (std::vector<NodeId>{1, 2}));
  EXPECT_FALSE(cfg.simulation.mean_chaining);
  EXPECT_FALSE(cfg.graph.subset.has_value());
  EXPECT_EQ(build_experiment_graph(cfg).node_count(), 12u);
  EXPECT_EQ(cfg.sweep_betas.size(), 2u);

  const ExperimentConfig defaults;
  EXPECT_EQ(defaults.pairs, 1000u);
  EXPECT_EQ(defaults.simulation.open_policy, OpenNodePolicy::Leaves);
  EXPECT_EQ(defaults.graph.subset, (std::pair<std::size_t, std::size_t>{80, 150}));
}

TEST(Config, RejectsUnknownOrInvalid) {
  EXPECT_ERROR_CODE(ErrorCode::InvalidConfig, parse_experiment_config(nlohmann::json::parse(R"({"sead": 1})")));
  EXPECT_ERROR_CODE(ErrorCode::InvalidConfig, parse_experiment_config(nlohmann::json::parse(R"({"seed": "x"})")));
  EXPECT_ERROR_CODE(ErrorCode::InvalidConfig, parse_experiment_config(nlohmann::json::parse(R"({"choice_mode": "any"})")));
  EXPECT_ERROR_CODE(ErrorCode::InvalidConfig, parse_experiment_config(nlohmann::json::parse(R"({"open_nodes": "some"})")));
  EXPECT_ERROR_CODE(ErrorCode::InvalidConfig, parse_experiment_config(nlohmann::json::parse(R"({"nodes": "a.csv"})")));
  EXPECT_ERROR_CODE(ErrorCode::InvalidConfig, parse_experiment_config(nlohmann::json::parse("[]")));
  EXPECT_ERROR_CODE(ErrorCode::Io, load_experiment_config("/nonexistent/config.json"));
}

TEST(Config, BundledConfigsLoad) {
  const auto desk = load_experiment_config(data_path("desk.json"));
  EXPECT_EQ(desk.seed, 7u);
  EXPECT_EQ(desk.categories, default_categories());
  const auto g = build_experiment_graph(desk);
  EXPECT_EQ(g.node_count(), 80u);
  EXPECT_EQ(g.edge_count(), 150u);

  const auto ten = load_experiment_config(data_path("ten_node.json"));
  EXPECT_EQ(build_experiment_graph(ten).edge_count(), 13u);
}

TEST(Sweep, OneCellPerValidThresholdPair) {
  auto cfg = ten_node_config();
  cfg.sweep_alphas = {0.2, 0.65};
  cfg.sweep_betas = {0.6, 0.8};
  const auto g = build_experiment_graph(cfg);
  const auto result = alpha_beta_sweep(g, cfg);
  ASSERT_EQ(result.cells.size(), 3u);
  ASSERT_EQ(result.rejected.size(), 1u);
  EXPECT_EQ(result.rejected[0].first, (Thresholds{0.65, 0.6}));
  for (const auto& c : result.cells) {
    EXPECT_EQ(c.n, 30u);
    EXPECT_EQ(c.seed, cfg.seed);
    // Each cell equals a direct run with its thresholds.
    const auto tl = predict_for(g, cfg, {c.alpha, c.beta});
    const auto pairs = sample_pairs(g, cfg.pairs, cfg.seed);
    EXPECT_EQ(c.lambda, average_difference(compare_pairs(tl, pairs).records));
  }
  EXPECT_EQ(alpha_beta_sweep(g, cfg).cells, result.cells);
}

TEST(Sweep, AllCellsRejected) {
  auto cfg = ten_node_config();
  cfg.sweep_alphas = {0.8, 0.9};
  cfg.sweep_betas = {0.5, 0.8};
  EXPECT_ERROR_CODE(ErrorCode::InvalidThresholds, alpha_beta_sweep(build_experiment_graph(cfg), cfg));
}

TEST(Report, CsvHeadersAndRows) {
  std::ostringstream cmp, sweep, events;
  std::vector<ComparisonRecord> records{{1, 2, 10.5, 9.0, 1.5, 12.0}};
  report::write_comparisons_csv(cmp, records);
  EXPECT_EQ(cmp.str(), "src,dst,T,tau,delta\n1,2,10.5,9,1.5\n");
  std::vector<SweepCell> cells{{0.3, 0.7, 4.25, 10, 7}};
  report::write_sweep_csv(sweep, cells);
  EXPECT_EQ(sweep.str(), "alpha,beta,n,lambda\n0.3,0.7,10,4.25\n");
  std::vector<Event> evs{{3, EventKind::ExternalArrival, 17, 4}, {3, EventKind::Exit, 2, 5}};
  report::write_events(events, evs);
  EXPECT_EQ(events.str(), "tick,event_kind,vehicle_id,node_or_edge_id\n3,external_arrival,17,4\n3,exit,2,5\n");
  EXPECT_EQ(report::comparisons_json(records)[0]["tau"], 9.0);
  EXPECT_EQ(report::sweep_json(cells)[0]["n"], 10);
}

TEST(Report, RouteTextAndDot) {
  const auto r = dynamic_dijkstra(scenarios::ten_node_timeline(), 0, 9);
  const auto text = report::route_text(r);
  EXPECT_NE(text.find("path: 0 -> 1 -> 3 -> 7 -> 9\n"), std::string::npos);
  EXPECT_NE(text.find("total: 36\n"), std::string::npos);
  const auto doc = report::route_json(r);
  EXPECT_EQ(doc["total_time"], 36.0);
  EXPECT_EQ(doc["hops"][2]["edge"], "3-7");

  const auto dot = report::to_dot(line_graph(2), 5);
  EXPECT_NE(dot.find("graph road_network_t5 {"), std::string::npos);
  EXPECT_NE(dot.find("n0 -- n1 [label=\"20.0/20.0\"]"), std::string::npos);
}

TEST(Report, SnapshotRows) {
  std::ostringstream out;
  report::write_snapshot_header(out);
  report::write_snapshot_rows(out, 4, line_graph(2));
  EXPECT_EQ(out.str(), "tick,edge_id,fwd_density,bwd_density,fwd_tt,bwd_tt\n4,0,0,0,20,20\n");
}
