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

#include "qecbench/blossom.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace qec {

namespace {
constexpr int64_t kInf = INT64_MAX / 4;
}

void MaxWeightMatcher::update_slack(int u, int x) {
    if (!slack_[x] || e_delta(g(u, x)) < e_delta(g(slack_[x], x))) slack_[x] = u;
}

void MaxWeightMatcher::set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; u++)
        if (g(u, x).w > 0 && st_[u] != x && S_[st_[u]] == 0) update_slack(u, x);
}

void MaxWeightMatcher::q_push(int x) {
    if (x <= n_) {
        q_.push_back(x);
    } else {
        for (int i : flower_[x]) q_push(i);
    }
}

void MaxWeightMatcher::set_st(int x, int b) {
    st_[x] = b;
    if (x > n_)
        for (int i : flower_[x]) set_st(i, b);
}

int MaxWeightMatcher::get_pr(int b, int xr) {
    int pr = static_cast<int>(std::find(flower_[b].begin(), flower_[b].end(), xr) -
                              flower_[b].begin());
    if (pr % 2 == 1) {
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        return static_cast<int>(flower_[b].size()) - pr;
    }
    return pr;
}

void MaxWeightMatcher::set_match(int u, int v) {
    match_[u] = g(u, v).v;
    if (u <= n_) return;
    E& e = g(u, v);
    int xr = flower_from(u, e.u);
    int pr = get_pr(u, xr);
    for (int i = 0; i < pr; i++) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
}

void MaxWeightMatcher::augment(int u, int v) {
    for (;;) {
        int xnv = st_[match_[u]];
        set_match(u, v);
        if (!xnv) return;
        set_match(xnv, st_[pa_[xnv]]);
        u = st_[pa_[xnv]];
        v = xnv;
    }
}

int MaxWeightMatcher::get_lca(int u, int v) {
    for (vis_time_++; u || v; std::swap(u, v)) {
        if (u == 0) continue;
        if (vis_[u] == vis_time_) return u;
        vis_[u] = vis_time_;
        u = st_[match_[u]];
        if (u) u = st_[pa_[u]];
    }
    return 0;
}

void MaxWeightMatcher::add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) b++;
    if (b > n_x_) n_x_++;
    lab_[b] = 0;
    S_[b] = 0;
    match_[b] = match_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
        flower_[b].push_back(x);
        flower_[b].push_back(y = st_[match_[x]]);
        q_push(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
        flower_[b].push_back(x);
        flower_[b].push_back(y = st_[match_[x]]);
        q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; x++) g(b, x).w = g(x, b).w = 0;
    for (int x = 1; x <= n_; x++) flower_from(b, x) = 0;
    for (int xs : flower_[b]) {
        for (int x = 1; x <= n_x_; x++)
            if (g(b, x).w == 0 || e_delta(g(xs, x)) < e_delta(g(b, x))) {
                g(b, x) = g(xs, x);
                g(x, b) = g(x, xs);
            }
        for (int x = 1; x <= n_; x++)
            if (flower_from(xs, x)) flower_from(b, x) = xs;
    }
    set_slack(b);
}

void MaxWeightMatcher::expand_blossom(int b) {
    for (int i : flower_[b]) set_st(i, i);
    int xr = flower_from(b, g(b, pa_[b]).u);
    int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
        int xs = flower_[b][i], xns = flower_[b][i + 1];
        pa_[xs] = g(xns, xs).u;
        S_[xs] = 1;
        S_[xns] = 0;
        slack_[xs] = 0;
        set_slack(xns);
        q_push(xns);
    }
    S_[xr] = 1;
    pa_[xr] = pa_[b];
    for (size_t i = static_cast<size_t>(pr) + 1; i < flower_[b].size(); i++) {
        int xs = flower_[b][i];
        S_[xs] = -1;
        set_slack(xs);
    }
    st_[b] = 0;
}

bool MaxWeightMatcher::on_found_edge(const E& e) {
    int u = st_[e.u], v = st_[e.v];
    if (S_[v] == -1) {
        pa_[v] = e.u;
        S_[v] = 1;
        int nu = st_[match_[v]];
        slack_[v] = slack_[nu] = 0;
        S_[nu] = 0;
        q_push(nu);
    } else if (S_[v] == 0) {
        int lca = get_lca(u, v);
        if (!lca) {
            augment(u, v);
            augment(v, u);
            return true;
        }
        add_blossom(u, lca, v);
    }
    return false;
}

bool MaxWeightMatcher::matching_pass() {
    std::fill(S_.begin() + 1, S_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin() + 1, slack_.begin() + n_x_ + 1, 0);
    q_.clear();
    for (int x = 1; x <= n_x_; x++)
        if (st_[x] == x && !match_[x]) {
            pa_[x] = 0;
            S_[x] = 0;
            q_push(x);
        }
    if (q_.empty()) return false;
    for (;;) {
        while (!q_.empty()) {
            int u = q_.front();
            q_.pop_front();
            if (S_[st_[u]] == 1) continue;
            for (int v = 1; v <= n_; v++)
                if (g(u, v).w > 0 && st_[u] != st_[v]) {
                    if (e_delta(g(u, v)) == 0) {
                        if (on_found_edge(g(u, v))) return true;
                    } else {
                        update_slack(u, st_[v]);
                    }
                }
        }
        int64_t d = kInf;
        for (int b = n_ + 1; b <= n_x_; b++)
            if (st_[b] == b && S_[b] == 1) d = std::min(d, lab_[b] / 2);
        for (int x = 1; x <= n_x_; x++)
            if (st_[x] == x && slack_[x]) {
                if (S_[x] == -1)
                    d = std::min(d, e_delta(g(slack_[x], x)));
                else if (S_[x] == 0)
                    d = std::min(d, e_delta(g(slack_[x], x)) / 2);
            }
        for (int u = 1; u <= n_; u++) {
            if (S_[st_[u]] == 0) {
                if (lab_[u] <= d) return false;
                lab_[u] -= d;
            } else if (S_[st_[u]] == 1) {
                lab_[u] += d;
            }
        }
        for (int b = n_ + 1; b <= n_x_; b++)
            if (st_[b] == b) {
                if (S_[b] == 0)
                    lab_[b] += d * 2;
                else if (S_[b] == 1)
                    lab_[b] -= d * 2;
            }
        q_.clear();
        for (int x = 1; x <= n_x_; x++)
            if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                e_delta(g(slack_[x], x)) == 0)
                if (on_found_edge(g(slack_[x], x))) return true;
        for (int b = n_ + 1; b <= n_x_; b++)
            if (st_[b] == b && S_[b] == 1 && lab_[b] == 0) expand_blossom(b);
    }
}

int64_t MaxWeightMatcher::solve(int n, const std::vector<int64_t>& weights,
                                std::vector<int>& match) {
    n_ = n;
    cap_ = n + n / 2 + 2;
    g_.assign(static_cast<size_t>(cap_) * cap_, E{});
    flower_from_.assign(static_cast<size_t>(cap_) * cap_, 0);
    lab_.assign(cap_, 0);
    match_.assign(cap_, 0);
    slack_.assign(cap_, 0);
    st_.assign(cap_, 0);
    pa_.assign(cap_, 0);
    S_.assign(cap_, 0);
    vis_.assign(cap_, 0);
    flower_.assign(cap_, {});
    vis_time_ = 0;
    n_x_ = n;

    int64_t w_max = 0;
    for (int u = 1; u <= n_; u++) {
        st_[u] = u;
        flower_from(u, u) = u;
        for (int v = 1; v <= n_; v++) {
            int64_t w = weights[static_cast<size_t>(u - 1) * n + (v - 1)];
            if (u == v || w <= 0) w = 0;
            g(u, v) = E{u, v, w};
            w_max = std::max(w_max, w);
        }
    }
    for (int x = n_ + 1; x < cap_; x++) st_[x] = x;
    for (int u = 1; u <= n_; u++) lab_[u] = w_max;

    while (matching_pass()) {
    }

    int64_t total = 0;
    match.assign(n, -1);
    for (int u = 1; u <= n_; u++) {
        if (match_[u]) {
            match[u - 1] = match_[u] - 1;
            if (match_[u] < u) total += g(u, match_[u]).w;
        }
    }
    return total;
}

}  // namespace qec
