#include <random>
#include <sstream>

#include "support.hpp"

using namespace dynroute;
using namespace testing_support;

namespace {

std::vector<NodeRecord> parse_nodes_text(const std::string& text) {
  std::istringstream in(text);
  return io::parse_nodes(in);
}

std::vector<EdgeRecord> parse_edges_text(const std::string& text, const CategoryTable& cats = default_categories()) {
  std::istringstream in(text);
  return io::parse_edges(in, cats);
}

}  // namespace

TEST(Graph, BuildFillsConnectionsSymmetrically) {
  const auto g = square_graph();
  ASSERT_EQ(g.node_count(), 4u);
  ASSERT_EQ(g.edge_count(), 5u);
  EXPECT_EQ(g.node(0).node_connections, (std::vector<NodeId>{1, 3, 2}));
  EXPECT_EQ(g.node(0).edge_connections, (std::vector<EdgeId>{0, 3, 4}));
  for (const auto& n : g.nodes()) {
    for (std::size_t k = 0; k < n.node_connections.size(); ++k) {
      const auto& e = g.edge(n.edge_connections[k]);
      const NodeId other = e.start_node == n.id ? e.end_node : e.start_node;
      EXPECT_EQ(other, n.node_connections[k]);
    }
  }
  EXPECT_EQ(g.find_edge(2, 0), std::optional<EdgeId>(4));
  EXPECT_FALSE(g.find_edge(1, 3).has_value());
  EXPECT_TRUE(g.is_connected());
}

TEST(Graph, SortsRecordsById) {
  std::vector<NodeRecord> nodes{node(2), node(0), node(1)};
  std::vector<EdgeRecord> edges{edge(1, 1, 2), edge(0, 0, 1)};
  const auto g = build_graph(nodes, edges);
  EXPECT_EQ(g.node(2).id, 2);
  EXPECT_EQ(g.edge(0).start_node, 0);
}

TEST(Graph, RejectsDuplicateNodeIds) {
  EXPECT_ERROR_CODE(ErrorCode::DuplicateNodeId, build_graph({node(0), node(1), node(1)}, {}));
}

TEST(Graph, RejectsNonContiguousIds) {
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, build_graph({node(0), node(2)}, {}));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, build_graph({node(0), node(1)}, {edge(1, 0, 1)}));
}

TEST(Graph, RejectsDanglingEndpoint) {
  EXPECT_ERROR_CODE(ErrorCode::DanglingEndpoint, build_graph({node(0), node(1)}, {edge(0, 0, 5)}));
  EXPECT_ERROR_CODE(ErrorCode::DanglingEndpoint, build_graph({node(0), node(1)}, {edge(0, -1, 1)}));
}

TEST(Graph, RejectsSelfLoopsAndParallelEdges) {
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, build_graph({node(0), node(1)}, {edge(0, 1, 1)}));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, build_graph({node(0), node(1)}, {edge(0, 0, 1), edge(1, 1, 0)}));
}

TEST(Graph, RejectsInvalidEdgeAndNodeFields) {
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, build_graph({node(0), node(1)}, {edge(0, 0, 1, 0.0)}));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, build_graph({node(0), node(1)}, {edge(0, 0, 1, 10.0, 7.0, 5.0, 5.0)}));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, build_graph({node(0, 0.0, 3.5)}, {}));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, build_graph({node(0, -1.0)}, {}));
}

TEST(Graph, ReachabilityOnDisconnectedGraph) {
  const auto g = build_graph({node(0), node(1), node(2), node(3)}, {edge(0, 0, 1), edge(1, 2, 3)});
  EXPECT_EQ(g.reachable_from(0), (std::vector<NodeId>{0, 1}));
  EXPECT_FALSE(g.is_connected());
}

TEST(IoNodes, ParsesWithDefaultsCommentsAndHeader) {
  const auto nodes = parse_nodes_text(
      "id,lat,lon,category,gaussian_mean,gaussian_sigma\n"
      "# comment\n"
      "\n"
      "0,37.1,-122.2,junction\n"
      "1,37.2,-122.3,junction,4.5\n"
      "2,37.3,-122.4,junction,2,0.5\n");
  ASSERT_EQ(nodes.size(), 3u);
  EXPECT_EQ(nodes[0].gaussian_mean, 0.0);
  EXPECT_EQ(nodes[0].gaussian_sigma, 1.0);
  EXPECT_EQ(nodes[1].gaussian_mean, 4.5);
  EXPECT_EQ(nodes[1].gaussian_sigma, 1.0);
  EXPECT_EQ(nodes[2].gaussian_sigma, 0.5);
  EXPECT_DOUBLE_EQ(nodes[2].latitude, 37.3);
}

TEST(IoNodes, RejectsBadRows) {
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, parse_nodes_text("0,37.1,-122.2\n"));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, parse_nodes_text("0,abc,-122.2,junction\n"));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, parse_nodes_text("0,37,-122,junction,0,4\n"));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, parse_nodes_text("0,37,-122,junction,0,0\n"));
  EXPECT_ERROR_CODE(ErrorCode::DuplicateNodeId, parse_nodes_text("0,37,-122,j\n0,38,-122,j\n"));
}

TEST(IoEdges, ParsesCategoriesIntoSpeeds) {
  const auto edges = parse_edges_text("id,start,end,distance,category\n0,0,1,334,arterial\n1,1,2,100,local\n");
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[0].thickness, 7.0);
  EXPECT_EQ(edges[0].free_flow_speed, 16.7);
  EXPECT_EQ(edges[0].jam_speed, 2.8);
  EXPECT_DOUBLE_EQ(edges[0].forward_travel_time, 334.0 / 16.7);
  EXPECT_EQ(edges[0].backward_travel_time, edges[0].forward_travel_time);
  EXPECT_EQ(edges[1].category, "local");
  EXPECT_TRUE(edges[1].vehicle_forward_list.empty());
}

TEST(IoEdges, RejectsBadRows) {
  EXPECT_ERROR_CODE(ErrorCode::UnknownCategory, parse_edges_text("0,0,1,100,motorway\n"));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, parse_edges_text("0,0,1,0,local\n"));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, parse_edges_text("0,0,1,-5,local\n"));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, parse_edges_text("0,0,1,100\n"));
  EXPECT_ERROR_CODE(ErrorCode::MalformedRow, parse_edges_text("0,0,x,100,local\n"));
}

TEST(IoEdges, DanglingEndpointSurfacesAtBuild) {
  auto nodes = parse_nodes_text("0,37,-122,j\n1,37.1,-122,j\n");
  auto edges = parse_edges_text("0,0,7,100,local\n");
  EXPECT_ERROR_CODE(ErrorCode::DanglingEndpoint, build_graph(nodes, edges));
}

TEST(IoCategories, RoundTripAndValidation) {
  const auto table = default_categories();
  EXPECT_EQ(io::parse_categories(io::categories_to_json(table)), table);
  EXPECT_EQ(io::load_categories(data_path("categories.json")), table);
  EXPECT_ERROR_CODE(ErrorCode::InvalidConfig,
                    io::parse_categories(nlohmann::json::parse(R"({"x": {"thickness": 1, "free_flow_speed": 2, "jam_speed": 3}})")));
  EXPECT_ERROR_CODE(ErrorCode::InvalidConfig, io::parse_categories(nlohmann::json::parse(R"({"x": {"thickness": 1}})")));
}

TEST(IoGraph, LoadsBundledTenNodeNetwork) {
  const auto g = io::load_graph(data_path("ten_node_nodes.csv"), data_path("ten_node_edges.csv"), default_categories());
  EXPECT_EQ(g.node_count(), 10u);
  EXPECT_EQ(g.edge_count(), 13u);
  EXPECT_TRUE(g.is_connected());
}

TEST(IoGraph, MissingFileIsIoError) {
  EXPECT_ERROR_CODE(ErrorCode::Io, io::load_nodes("/nonexistent/nodes.csv"));
}

// Writing a graph and reading it back gives the same graph, for many random
// generated networks.
TEST(IoGraph, RoundTripProperty) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    GridNetworkSpec spec;
    spec.rows = 3 + seed % 5;
    spec.cols = 2 + seed % 7;
    spec.seed = seed;
    const auto g = make_grid_network(spec);
    std::stringstream nodes_text, edges_text;
    io::write_nodes(nodes_text, g.nodes());
    io::write_edges(edges_text, g.edges());
    const auto back = build_graph(io::parse_nodes(nodes_text), io::parse_edges(edges_text, default_categories()));
    ASSERT_EQ(back, g) << "seed " << seed;
  }
}

TEST(IoNumbers, FormatsShortestRoundTrip) {
  EXPECT_EQ(io::format_number(36.0), "36");
  EXPECT_EQ(io::format_number(0.1), "0.1");
  const double x = 1.0 / 3.0;
  double back = 0.0;
  ASSERT_TRUE(io::detail::parse_number(io::format_number(x), back));
  EXPECT_EQ(back, x);
}
