#pragma once

// Two-source nsfnet14 instance: nodes 5 and 10 each send one unit to
// 1, 2, 3, 4, 6 and 7. The design is the published routing, wavelength and
// coding plan for it. Copies live in data/worked_example/.

#include <string_view>

namespace ocnet::worked_example {

inline constexpr std::string_view kTopology = "nsfnet14";

inline constexpr std::string_view kTraffic = R"csv(NodeID,1,2,3,4,5,6,7,8,9,10,11,12,13,14
1,0,0,0,0,0,0,0,0,0,0,0,0,0,0
2,0,0,0,0,0,0,0,0,0,0,0,0,0,0
3,0,0,0,0,0,0,0,0,0,0,0,0,0,0
4,0,0,0,0,0,0,0,0,0,0,0,0,0,0
5,1,1,1,1,0,1,1,0,0,0,0,0,0,0
6,0,0,0,0,0,0,0,0,0,0,0,0,0,0
7,0,0,0,0,0,0,0,0,0,0,0,0,0,0
8,0,0,0,0,0,0,0,0,0,0,0,0,0,0
9,0,0,0,0,0,0,0,0,0,0,0,0,0,0
10,1,1,1,1,0,1,1,0,0,0,0,0,0,0
11,0,0,0,0,0,0,0,0,0,0,0,0,0,0
12,0,0,0,0,0,0,0,0,0,0,0,0,0,0
13,0,0,0,0,0,0,0,0,0,0,0,0,0,0
14,0,0,0,0,0,0,0,0,0,0,0,0,0,0
)csv";

inline constexpr std::string_view kSolution = R"txt(# Routing, wavelengths and coded backups for the two-source nsfnet14 traffic.
# Working and backup wavelengths differ per demand, so this design only
# validates in lenient wavelength mode.
wavelength-mode lenient
assign 1 5 1 working 5-4-2-1 5 backup 5-7-3-1 2
assign 2 5 2 working 5-4-2 4 backup 5-7-3-2 6
assign 3 5 3 working 5-4-2-3 6 backup 5-7-3 3
assign 4 5 4 working 5-4 1 backup 5-7-3-2-4 5
assign 5 5 6 working 5-4-2-1-8-6 3 backup 5-6 5
assign 6 5 7 working 5-7 1 backup 5-6-8-1-3-7 6
assign 7 10 1 working 10-11-8-1 5 backup 10-7-3-1 1
assign 8 10 2 working 10-11-8-1-2 4 backup 10-7-3-2 6
assign 9 10 3 working 10-11-8-1-3 1 backup 10-7-3 5
assign 10 10 4 working 10-11-1-9-4 3 backup 10-7-3-2-4 4
assign 11 10 6 working 10-11-8-6 6 backup 10-7-5-6 3
assign 12 10 7 working 10-7 2 backup 10-11-8-1-3-7 2
coding 1 7 node 7 path 7-3-1 wavelength 2
coding 2 8 node 7 path 7-3-2 wavelength 5
coding 3 9 node 7 path 7-3 wavelength 6
coding 4 10 node 7 path 7-3-2-4 wavelength 4
coding 6 12 node 8 path 8-1-3-7 wavelength 1
)txt";

inline constexpr int kExpectedCodings = 5;
inline constexpr int kExpectedWavelengths = 6;

}  // namespace ocnet::worked_example
