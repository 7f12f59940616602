#include <set>

#include "support.hpp"

using namespace dynroute;
using namespace testing_support;

namespace {

RoadGraph grid(std::size_t rows, std::size_t cols, std::uint64_t seed = 1) {
  GridNetworkSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.seed = seed;
  return make_grid_network(spec);
}

}  // namespace

TEST(Grid, ShapeAndAttributes) {
  const auto g = grid(10, 10);
  EXPECT_EQ(g.node_count(), 100u);
  EXPECT_GE(g.edge_count(), 180u);  // 2 * 10 * 9 lattice edges plus diagonals
  EXPECT_TRUE(g.is_connected());
  std::set<std::string> categories;
  for (const auto& e : g.edges()) {
    categories.insert(e.category);
    EXPECT_GT(e.distance, 0.0);
    EXPECT_DOUBLE_EQ(e.forward_travel_time, e.free_flow_time());
  }
  EXPECT_EQ(categories, (std::set<std::string>{"arterial", "collector", "local"}));
  for (const auto& n : g.nodes()) {
    EXPECT_GE(n.gaussian_sigma, 0.5);
    EXPECT_LE(n.gaussian_sigma, 1.5);
  }
}

TEST(Grid, SameSeedSameNetwork) {
  EXPECT_EQ(grid(6, 7, 3), grid(6, 7, 3));
  EXPECT_FALSE(grid(6, 7, 3) == grid(6, 7, 4));
}

TEST(Haversine, KnownDistance) {
  // One degree of latitude is about 111.2 km on the mean-radius sphere.
  EXPECT_NEAR(haversine_m(0.0, 0.0, 1.0, 0.0), 111'195.0, 5.0);
  EXPECT_EQ(haversine_m(10.0, 20.0, 10.0, 20.0), 0.0);
}

TEST(Subset, DeskScaleSubsetIsConnectedWithExactCounts) {
  const auto g = grid(10, 10);
  const auto s = subset_graph(g, 80, 150, 7);
  EXPECT_EQ(s.node_count(), 80u);
  EXPECT_EQ(s.edge_count(), 150u);
  EXPECT_TRUE(s.is_connected());
}

// Random subsets are connected, within budget, and keep original distances.
TEST(Subset, ConnectivityProperty) {
  const auto g = grid(8, 8, 5);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, g.node_count())(rng);
    const auto max_e = std::min(g.edge_count(), n * (n - 1) / 2);
    const auto e = std::uniform_int_distribution<std::size_t>(n - 1, std::max(n - 1, max_e))(rng);
    RoadGraph s;
    try {
      s = subset_graph(g, n, e, rng());
    } catch (const Error& err) {
      ASSERT_EQ(err.code(), ErrorCode::Unsatisfiable);
      continue;
    }
    ASSERT_EQ(s.node_count(), n);
    ASSERT_LE(s.edge_count(), e);
    ASSERT_GE(s.edge_count(), n - 1);
    ASSERT_TRUE(s.is_connected()) << "trial " << trial;
  }
}

TEST(Subset, WholeConnectedGraphIsIdentity) {
  const auto g = grid(4, 5, 9);
  EXPECT_EQ(subset_graph(g, g.node_count(), g.edge_count(), 123), g);
}

TEST(Subset, Unsatisfiable) {
  const auto g = grid(3, 3);
  EXPECT_ERROR_CODE(ErrorCode::Unsatisfiable, subset_graph(g, 10, 5, 1));
  EXPECT_ERROR_CODE(ErrorCode::Unsatisfiable, subset_graph(g, 5, 3, 1));
  EXPECT_ERROR_CODE(ErrorCode::Unsatisfiable, subset_graph(g, 3, g.edge_count() + 1, 1));
  const auto split = build_graph({node(0), node(1), node(2), node(3)}, {edge(0, 0, 1), edge(1, 2, 3)});
  EXPECT_ERROR_CODE(ErrorCode::Unsatisfiable, subset_graph(split, 3, 2, 1));
  EXPECT_EQ(subset_graph(g, 0, 0, 1).node_count(), 0u);
}

TEST(Subset, Deterministic) {
  const auto g = grid(10, 10);
  EXPECT_EQ(subset_graph(g, 40, 60, 11), subset_graph(g, 40, 60, 11));
}
