// Copyright 2026 The qecbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QECBENCH_MATCHING_GRAPH_HPP
#define QECBENCH_MATCHING_GRAPH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qecbench/dem.hpp"

namespace qec {

// Edge weights are carried both as doubles (reporting) and as fixed-point
// integers (all shortest-path and matching arithmetic), so optimality
// comparisons are exact and reproducible.
constexpr int64_t kWeightScale = 1 << 20;

struct MatchingGraph {
    struct Edge {
        uint32_t u, v;  // v may equal boundary_id()
        double p = 0;
        double weight = 0;
        int64_t iweight = 0;
        uint64_t obs_mask = 0;
    };

    uint32_t num_detectors = 0;  // global detector-id space
    std::vector<uint32_t> nodes;  // detector ids with at least one edge, sorted
    std::vector<Edge> edges;
    // Optional diagnostics coordinates (x, y, round) parallel to `nodes`.
    std::vector<std::array<double, 3>> node_coords;
    std::vector<std::string> diagnostics;

    uint32_t boundary_id() const { return num_detectors; }
    bool connected_to_boundary() const;  // every node reaches the boundary
};

// Reduces a detector error model to a weighted matching graph:
//   2-detector mechanisms -> internal edges,
//   1-detector mechanisms -> boundary edges,
//   >=3-detector mechanisms -> decomposed into existing edges when an exact
//     two-piece cover exists, else split greedily into 2-detector pieces
//     (plus a boundary remainder) carrying the mechanism's probability.
// Parallel edges merge by probability combination; an edge's weight is
// ln((1-p)/p) with p clamped at 1/2 (weight 0, with a warning).
MatchingGraph dem_to_matching_graph(const DetectorErrorModel& dem);

// Edge list "u,v,weight,p,obs_mask" with B as the boundary id.
std::string matching_graph_to_csv(const MatchingGraph& g);

}  // namespace qec

#endif
