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

#ifndef QECBENCH_BLOSSOM_HPP
#define QECBENCH_BLOSSOM_HPP

#include <cstdint>
#include <deque>
#include <vector>

namespace qec {

// Maximum-weight matching in a general graph, O(n^3) primal-dual blossom
// algorithm (Galil's formulation) over integer weights. With all edge
// weights positive the result has maximum cardinality, which is how the
// decoder forces perfect matchings. Deterministic: vertices are scanned in
// fixed index order, so tied optima resolve the same way on every run.
//
// Instances hold scratch arrays and are reusable across solves; they are not
// thread-safe (use one instance per worker).
class MaxWeightMatcher {
  public:
    // weights: n*n row-major symmetric matrix; entries <= 0 mean "no edge".
    // match[i] receives the 0-based partner of vertex i, or -1 if unmatched.
    // Returns the total weight of the matching.
    int64_t solve(int n, const std::vector<int64_t>& weights, std::vector<int>& match);

  private:
    struct E {
        int u = 0, v = 0;
        int64_t w = 0;
    };

    int n_ = 0, n_x_ = 0, cap_ = 0;
    std::vector<E> g_;             // (cap_)^2
    std::vector<int64_t> lab_;
    std::vector<int> match_, slack_, st_, pa_, S_, vis_;
    std::vector<int> flower_from_;  // (cap_)^2
    std::vector<std::vector<int>> flower_;
    std::deque<int> q_;
    int vis_time_ = 0;

    E& g(int u, int v) { return g_[static_cast<size_t>(u) * cap_ + v]; }
    int& flower_from(int b, int x) { return flower_from_[static_cast<size_t>(b) * cap_ + x]; }

    int64_t e_delta(const E& e) { return lab_[e.u] + lab_[e.v] - g(e.u, e.v).w * 2; }
    void update_slack(int u, int x);
    void set_slack(int x);
    void q_push(int x);
    void set_st(int x, int b);
    int get_pr(int b, int xr);
    void set_match(int u, int v);
    void augment(int u, int v);
    int get_lca(int u, int v);
    void add_blossom(int u, int lca, int v);
    void expand_blossom(int b);
    bool on_found_edge(const E& e);
    bool matching_pass();
};

}  // namespace qec

#endif
