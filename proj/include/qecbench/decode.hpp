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

#ifndef QECBENCH_DECODE_HPP
#define QECBENCH_DECODE_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "qecbench/blossom.hpp"
#include "qecbench/matching_graph.hpp"
#include "qecbench/sim.hpp"

namespace qec {

class InfeasibleMatchingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Syndrome {
    std::vector<uint32_t> flagged;  // global detector ids, sorted
};

struct Matching {
    // Matched pairs as global detector ids; -1 stands for the boundary.
    std::vector<std::pair<int64_t, int64_t>> pairs;
    double total_weight = 0;
    int64_t total_iweight = 0;
    uint64_t observable_flip = 0;
};

// Minimum-weight perfect matching over one graph. Shortest paths between
// defects come from single-source Dijkstra runs cached per source node; the
// cache never changes results, only cost. One Decoder per worker thread; the
// graph is shared read-only.
class Decoder {
  public:
    explicit Decoder(const MatchingGraph& g);

    Matching decode(const Syndrome& syndrome);

  private:
    struct Row {
        std::vector<int64_t> dist;   // by local node id; boundary last
        std::vector<uint64_t> mask;  // observable mask along the chosen path
    };
    const Row& row_for(uint32_t local);
    uint32_t local_of(uint32_t global) const;

    const MatchingGraph& g_;
    uint32_t num_local_;  // nodes + boundary
    struct Arc {
        uint32_t to;
        int64_t w;
        uint64_t mask;
    };
    std::vector<std::vector<Arc>> adj_;
    std::unordered_map<uint32_t, Row> rows_;
    MaxWeightMatcher matcher_;
    std::vector<int64_t> cost_;
    std::vector<int> match_;
};

// One-shot convenience wrapper.
Matching mwpm_decode(const MatchingGraph& g, const Syndrome& syndrome);

// Decodes every shot of a batch against one or two (X/Z-split) graphs and
// returns the predicted observable bits; split predictions XOR together.
// Deterministic for any worker count.
ShotBatch decode_batch(const std::vector<const MatchingGraph*>& graphs, const ShotBatch& batch,
                       int workers = 1);
ShotBatch decode_batch(const MatchingGraph& g, const ShotBatch& batch, int workers = 1);

// Exhaustive maximum-likelihood reference decoder: enumerates all mechanism
// subsets (capacity 20) and returns the observable flip of the most probable
// subset reproducing the syndrome. Ties resolve to the lexicographically
// first subset.
std::vector<uint32_t> brute_force_mle_decode(const DetectorErrorModel& dem,
                                             const Syndrome& syndrome);

}  // namespace qec

#endif
