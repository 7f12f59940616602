#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include "dynroute/io.hpp"
#include "dynroute/timeline.hpp"

// Ten-junction worked example with hand-specified travel times on 13 roads
// over eight evaluation instants (t = 18 is listed twice). Identical to
// data/ten_node_timeline.txt.

namespace dynroute::scenarios {

inline constexpr std::string_view kTable4Timeline = R"(# Ten-node worked example: 13 two-way roads, travel times in time units.
# The t=18 block appears twice (two evaluation events at the same instant).
nodes: 10
symmetric: true
timestamp: 0
0,1,8
0,2,6
1,3,12
1,4,6
2,4,8
2,5,16
3,6,13
3,7,12
4,6,6
5,8,17
6,9,23
7,9,16
8,9,17
timestamp: 6
0,1,1
0,2,3
1,3,13
1,4,5
2,4,16
2,5,12
3,6,4
3,7,12
4,6,6
5,8,17
6,9,23
7,9,7
8,9,15
timestamp: 8
0,1,1
0,2,2
1,3,12
1,4,6
2,4,11
2,5,12
3,6,4
3,7,12
4,6,4
5,8,17
6,9,23
7,9,7
8,9,15
timestamp: 14
0,1,8
0,2,3
1,3,16
1,4,5
2,4,11
2,5,12
3,6,4
3,7,14
4,6,4
5,8,17
6,9,23
7,9,11
8,9,15
timestamp: 18
0,1,8
0,2,2
1,3,15
1,4,5
2,4,1
2,5,12
3,6,4
3,7,16
4,6,4
5,8,17
6,9,23
7,9,7
8,9,15
timestamp: 18
0,1,8
0,2,2
1,3,15
1,4,5
2,4,1
2,5,12
3,6,4
3,7,16
4,6,4
5,8,17
6,9,23
7,9,7
8,9,15
timestamp: 20
0,1,1
0,2,2
1,3,14
1,4,5
2,4,7
2,5,12
3,6,4
3,7,12
4,6,4
5,8,17
6,9,7
7,9,7
8,9,15
timestamp: 32
0,1,8
0,2,2
1,3,14
1,4,5
2,4,7
2,5,12
3,6,4
3,7,14
4,6,4
5,8,21
6,9,7
7,9,4
8,9,15
)";

inline io::TimelineDocument ten_node_document() {
  std::istringstream in{std::string(kTable4Timeline)};
  return io::parse_timeline_document(in);
}

inline WeightTimeline ten_node_timeline() { return ten_node_document().timeline; }

}  // namespace dynroute::scenarios
