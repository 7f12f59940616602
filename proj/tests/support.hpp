#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "dynroute/dynroute.hpp"

namespace testing_support {

using namespace dynroute;

/// Runs `fn` and checks it throws dynroute::Error with `code`.
template <typename Fn>
::testing::AssertionResult throws_code(ErrorCode code, Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const Error& e) {
    if (e.code() == code) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "threw '" << e.what() << "', expected code " << to_string(code);
  } catch (const std::exception& e) {
    return ::testing::AssertionFailure() << "threw non-library exception: " << e.what();
  }
  return ::testing::AssertionFailure() << "did not throw, expected " << to_string(code);
}

#define EXPECT_ERROR_CODE(code, stmt) EXPECT_TRUE(::testing_support::throws_code((code), [&] { stmt; }))

inline NodeRecord node(NodeId id, double mean = 0.0, double sigma = 1.0) {
  NodeRecord n;
  n.id = id;
  n.latitude = 37.77 + 0.001 * id;
  n.longitude = -122.41;
  n.category = "junction";
  n.gaussian_mean = mean;
  n.gaussian_sigma = sigma;
  return n;
}

inline EdgeRecord edge(EdgeId id, NodeId a, NodeId b, double distance = 400.0, double thickness = 7.0,
                       double ff = 20.0, double jam = 5.0) {
  EdgeRecord e;
  e.id = id;
  e.start_node = a;
  e.end_node = b;
  e.distance = distance;
  e.category = "test";
  e.thickness = thickness;
  e.free_flow_speed = ff;
  e.jam_speed = jam;
  e.forward_travel_time = e.backward_travel_time = distance / ff;
  return e;
}

/// 0 - 1 - 2 - ... - (n-1)
inline RoadGraph line_graph(int n, double distance = 400.0) {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  for (int i = 0; i < n; ++i) nodes.push_back(node(i));
  for (int i = 0; i + 1 < n; ++i) edges.push_back(edge(i, i, i + 1, distance));
  return build_graph(std::move(nodes), std::move(edges));
}

/// Square 0-1-2-3-0 with diagonal 0-2.
inline RoadGraph square_graph() {
  std::vector<NodeRecord> nodes{node(0), node(1), node(2), node(3)};
  std::vector<EdgeRecord> edges{edge(0, 0, 1), edge(1, 1, 2), edge(2, 2, 3), edge(3, 3, 0), edge(4, 0, 2, 600.0)};
  return build_graph(std::move(nodes), std::move(edges));
}

inline std::string data_path(const std::string& name) { return std::string(DYNROUTE_DATA_DIR) + "/" + name; }

/// Fresh per-test scratch directory.
inline std::filesystem::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::temp_directory_path() / "dynroute_tests" /
             (std::string(info->test_suite_name()) + "." + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
