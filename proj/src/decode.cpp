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

#include "qecbench/decode.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <thread>

namespace qec {

namespace {
constexpr int64_t kUnreachable = INT64_MAX / 4;
}

Decoder::Decoder(const MatchingGraph& g) : g_(g) {
    num_local_ = static_cast<uint32_t>(g.nodes.size()) + 1;  // + boundary
    adj_.assign(num_local_, {});
    auto local = [&](uint32_t global) -> uint32_t {
        if (global == g.boundary_id()) return num_local_ - 1;
        return static_cast<uint32_t>(
            std::lower_bound(g.nodes.begin(), g.nodes.end(), global) - g.nodes.begin());
    };
    for (const auto& e : g.edges) {
        uint32_t u = local(e.u), v = local(e.v);
        adj_[u].push_back({v, e.iweight, e.obs_mask});
        adj_[v].push_back({u, e.iweight, e.obs_mask});
    }
    for (auto& arcs : adj_)
        std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
            return a.to != b.to ? a.to < b.to : a.w < b.w;
        });
}

uint32_t Decoder::local_of(uint32_t global) const {
    auto it = std::lower_bound(g_.nodes.begin(), g_.nodes.end(), global);
    if (it == g_.nodes.end() || *it != global)
        throw InfeasibleMatchingError("flagged detector " + std::to_string(global) +
                                      " has no edges in the matching graph");
    return static_cast<uint32_t>(it - g_.nodes.begin());
}

const Decoder::Row& Decoder::row_for(uint32_t local) {
    auto it = rows_.find(local);
    if (it != rows_.end()) return it->second;

    Row row;
    row.dist.assign(num_local_, kUnreachable);
    row.mask.assign(num_local_, 0);
    // Deterministic Dijkstra: min-heap ordered by (dist, node); relaxations
    // are strict, so the first settled path wins ties.
    using QE = std::pair<int64_t, uint32_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> heap;
    row.dist[local] = 0;
    heap.push({0, local});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d != row.dist[u]) continue;
        for (const Arc& arc : adj_[u]) {
            int64_t nd = d + arc.w;
            if (nd < row.dist[arc.to]) {
                row.dist[arc.to] = nd;
                row.mask[arc.to] = row.mask[u] ^ arc.mask;
                heap.push({nd, arc.to});
            }
        }
    }
    return rows_.emplace(local, std::move(row)).first->second;
}

Matching Decoder::decode(const Syndrome& syndrome) {
    Matching result;
    const size_t k = syndrome.flagged.size();
    if (k == 0) return result;

    std::vector<uint32_t> locals(k);
    for (size_t i = 0; i < k; i++) locals[i] = local_of(syndrome.flagged[i]);
    const uint32_t boundary = num_local_ - 1;

    std::vector<const Row*> rows(k);
    for (size_t i = 0; i < k; i++) rows[i] = &row_for(locals[i]);

    // Defects 0..k-1, twins k..2k-1. Twin-twin pairs are free; a defect may
    // pair its own twin at boundary cost.
    const int n = static_cast<int>(2 * k);
    cost_.assign(static_cast<size_t>(n) * n, -1);
    auto cost_at = [&](int a, int b) -> int64_t& { return cost_[static_cast<size_t>(a) * n + b]; };
    int64_t max_cost = 0;
    for (size_t i = 0; i < k; i++) {
        for (size_t j = i + 1; j < k; j++) {
            int64_t d = rows[i]->dist[locals[j]];
            if (d < kUnreachable) {
                cost_at(i, j) = cost_at(j, i) = d;
                max_cost = std::max(max_cost, d);
            }
        }
        int64_t db = rows[i]->dist[boundary];
        if (db < kUnreachable) {
            cost_at(i, k + i) = cost_at(k + i, i) = db;
            max_cost = std::max(max_cost, db);
        }
        for (size_t j = k + i + 1; j < 2 * k; j++)
            if (j != k + i) cost_at(k + i, j) = cost_at(j, k + i) = 0;
        for (size_t j = k; j < k + i; j++) cost_at(k + i, j) = cost_at(j, k + i) = 0;
    }

    // Min-cost perfect matching via max-weight: w = 2*(C - cost) keeps every
    // real edge strictly positive.
    const int64_t C = max_cost + 1;
    std::vector<int64_t> weights(static_cast<size_t>(n) * n, 0);
    for (int a = 0; a < n; a++)
        for (int b = 0; b < n; b++) {
            int64_t c = cost_[static_cast<size_t>(a) * n + b];
            if (a != b && c >= 0) weights[static_cast<size_t>(a) * n + b] = 2 * (C - c);
        }

    matcher_.solve(n, weights, match_);
    for (int a = 0; a < n; a++)
        if (match_[a] < 0)
            throw InfeasibleMatchingError(
                "no perfect matching: odd defect set without boundary access");

    for (size_t i = 0; i < k; i++) {
        int m = match_[i];
        if (m < 0 || (static_cast<size_t>(m) < i)) continue;
        if (static_cast<size_t>(m) < k) {
            size_t j = static_cast<size_t>(m);
            result.pairs.push_back({syndrome.flagged[i], syndrome.flagged[j]});
            result.total_iweight += rows[i]->dist[locals[j]];
            result.observable_flip ^= rows[i]->mask[locals[j]];
        } else if (static_cast<size_t>(m) == k + i) {
            result.pairs.push_back({syndrome.flagged[i], -1});
            result.total_iweight += rows[i]->dist[boundary];
            result.observable_flip ^= rows[i]->mask[boundary];
        } else {
            throw InfeasibleMatchingError("defect matched to a foreign twin");
        }
    }
    result.total_weight =
        static_cast<double>(result.total_iweight) / static_cast<double>(kWeightScale);
    return result;
}

Matching mwpm_decode(const MatchingGraph& g, const Syndrome& syndrome) {
    Decoder decoder(g);
    return decoder.decode(syndrome);
}

namespace {

void decode_shot_range(const std::vector<const MatchingGraph*>& graphs,
                       const std::vector<std::vector<std::vector<uint32_t>>>& defects,
                       uint64_t begin, uint64_t end, ShotBatch& out) {
    std::vector<std::unique_ptr<Decoder>> decoders;
    for (const MatchingGraph* g : graphs) decoders.push_back(std::make_unique<Decoder>(*g));
    Syndrome syn;
    for (uint64_t s = begin; s < end; s++) {
        uint64_t flip = 0;
        for (size_t gi = 0; gi < graphs.size(); gi++) {
            if (defects[gi][s].empty()) continue;
            syn.flagged = defects[gi][s];
            flip ^= decoders[gi]->decode(syn).observable_flip;
        }
        for (uint32_t k = 0; k < out.num_observables; k++)
            if ((flip >> k) & 1u) out.set_observable(s, k, true);
    }
}

}  // namespace

ShotBatch decode_batch(const std::vector<const MatchingGraph*>& graphs, const ShotBatch& batch,
                       int workers) {
    ShotBatch out(0, batch.num_observables, batch.shots);
    if (graphs.empty()) return out;
    uint32_t num_det = graphs[0]->num_detectors;
    for (const MatchingGraph* g : graphs)
        if (g->num_detectors != num_det)
            throw std::invalid_argument("graphs disagree on detector count");
    if (batch.num_detectors != num_det)
        throw std::invalid_argument("batch detector count does not match graph");

    // Sparse transpose: per graph, per shot, the sorted flagged-node list.
    std::vector<std::vector<std::vector<uint32_t>>> defects(
        graphs.size(), std::vector<std::vector<uint32_t>>(batch.shots));
    std::vector<int8_t> owner(num_det, -1);
    for (size_t gi = 0; gi < graphs.size(); gi++)
        for (uint32_t d : graphs[gi]->nodes) {
            if (owner[d] != -1) throw std::invalid_argument("graphs share detector " + std::to_string(d));
            owner[d] = static_cast<int8_t>(gi);
        }
    for (uint32_t d = 0; d < num_det; d++) {
        const uint64_t* row = batch.det_row(d);
        for (size_t w = 0; w < batch.words_per_row; w++) {
            uint64_t bits = row[w];
            while (bits) {
                uint32_t lane = static_cast<uint32_t>(std::countr_zero(bits));
                bits &= bits - 1;
                uint64_t shot = static_cast<uint64_t>(w) * 64 + lane;
                if (shot >= batch.shots) continue;
                if (owner[d] < 0)
                    throw InfeasibleMatchingError("fired detector " + std::to_string(d) +
                                                  " belongs to no matching graph");
                defects[owner[d]][shot].push_back(d);
            }
        }
    }

    if (workers <= 1 || batch.shots < 128) {
        decode_shot_range(graphs, defects, 0, batch.shots, out);
        return out;
    }
    size_t words = batch.words_per_row;
    size_t n = std::min<size_t>(static_cast<size_t>(workers), words);
    std::vector<std::thread> pool;
    for (size_t t = 0; t < n; t++) {
        uint64_t begin = static_cast<uint64_t>(words * t / n) * 64;
        uint64_t end = std::min<uint64_t>(static_cast<uint64_t>(words * (t + 1) / n) * 64,
                                          batch.shots);
        pool.emplace_back(
            [&, begin, end] { decode_shot_range(graphs, defects, begin, end, out); });
    }
    for (auto& th : pool) th.join();
    return out;
}

ShotBatch decode_batch(const MatchingGraph& g, const ShotBatch& batch, int workers) {
    return decode_batch(std::vector<const MatchingGraph*>{&g}, batch, workers);
}

std::vector<uint32_t> brute_force_mle_decode(const DetectorErrorModel& dem,
                                             const Syndrome& syndrome) {
    const size_t m = dem.mechanisms.size();
    if (m > 20) throw std::invalid_argument("brute-force MLE capacity is 20 mechanisms");

    // Dense re-indexing of every touched detector, XOR arithmetic on words.
    std::vector<uint32_t> touched;
    for (const auto& mech : dem.mechanisms)
        touched.insert(touched.end(), mech.detectors.begin(), mech.detectors.end());
    for (uint32_t d : syndrome.flagged) touched.push_back(d);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    auto dense = [&](uint32_t d) {
        return static_cast<uint32_t>(std::lower_bound(touched.begin(), touched.end(), d) -
                                     touched.begin());
    };
    size_t words = (touched.size() + 63) / 64 + 1;
    auto make_sig = [&](const std::vector<uint32_t>& dets) {
        std::vector<uint64_t> sig(words, 0);
        for (uint32_t d : dets) {
            uint32_t i = dense(d);
            sig[i >> 6] ^= 1ull << (i & 63);
        }
        return sig;
    };
    std::vector<std::vector<uint64_t>> mech_sig;
    std::vector<uint64_t> mech_obs;
    std::vector<double> gain;  // log odds of firing mechanism i
    double base = 0;
    for (const auto& mech : dem.mechanisms) {
        mech_sig.push_back(make_sig(mech.detectors));
        uint64_t om = 0;
        for (uint32_t k : mech.observables) om |= 1ull << k;
        mech_obs.push_back(om);
        gain.push_back(std::log(mech.p) - std::log(1 - mech.p));
        base += std::log(1 - mech.p);
    }
    std::vector<uint64_t> target = make_sig(syndrome.flagged);

    double best = -HUGE_VAL;
    uint64_t best_obs = 0;
    bool found = false;
    std::vector<uint64_t> acc(words);
    for (uint64_t subset = 0; subset < (1ull << m); subset++) {
        std::fill(acc.begin(), acc.end(), 0);
        double lp = base;
        uint64_t obs = 0;
        for (size_t i = 0; i < m; i++)
            if ((subset >> i) & 1ull) {
                for (size_t w = 0; w < words; w++) acc[w] ^= mech_sig[i][w];
                obs ^= mech_obs[i];
                lp += gain[i];
            }
        if (acc != target) continue;
        if (!found || lp > best) {
            best = lp;
            best_obs = obs;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("syndrome not producible by any mechanism subset");
    std::vector<uint32_t> out;
    for (uint32_t k = 0; k < 64; k++)
        if ((best_obs >> k) & 1ull) out.push_back(k);
    return out;
}

}  // namespace qec
