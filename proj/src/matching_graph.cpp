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

#include "qecbench/matching_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace qec {

namespace {

double xor_probability(double p, double q) { return p * (1 - q) + q * (1 - p); }

using Endpoints = std::pair<uint32_t, uint32_t>;

struct EdgeAccumulator {
    // endpoints -> observable mask -> combined probability
    std::map<Endpoints, std::map<uint64_t, double>> buckets;

    void fold(Endpoints e, uint64_t mask, double p) {
        auto& by_mask = buckets[e];
        auto [it, inserted] = by_mask.try_emplace(mask, p);
        if (!inserted) it->second = xor_probability(it->second, p);
    }
    bool has(Endpoints e) const { return buckets.count(e) != 0; }
    // Mask of the currently dominant bucket (highest p; ties to the smaller
    // mask).
    uint64_t dominant_mask(Endpoints e) const {
        const auto& by_mask = buckets.at(e);
        uint64_t best = 0;
        double best_p = -1;
        for (const auto& [mask, p] : by_mask)
            if (p > best_p) {
                best = mask;
                best_p = p;
            }
        return best;
    }
};

uint64_t obs_mask_of(const std::vector<uint32_t>& observables) {
    uint64_t m = 0;
    for (uint32_t k : observables) m |= 1ull << k;
    return m;
}

}  // namespace

MatchingGraph dem_to_matching_graph(const DetectorErrorModel& dem) {
    MatchingGraph g;
    g.num_detectors = dem.num_detectors;
    const uint32_t B = g.boundary_id();
    EdgeAccumulator acc;

    auto endpoints_of = [&](uint32_t a, uint32_t b) {
        if (a > b) std::swap(a, b);
        return Endpoints{a, b};
    };

    std::vector<const ErrorMechanism*> hyper;
    for (const auto& m : dem.mechanisms) {
        uint64_t mask = obs_mask_of(m.observables);
        if (m.detectors.empty()) {
            g.diagnostics.push_back("mechanism with no detectors dropped (p=" + format_real(m.p) +
                                    ")");
        } else if (m.detectors.size() == 1) {
            acc.fold(endpoints_of(m.detectors[0], B), mask, m.p);
        } else if (m.detectors.size() == 2) {
            acc.fold(endpoints_of(m.detectors[0], m.detectors[1]), mask, m.p);
        } else {
            hyper.push_back(&m);
        }
    }

    for (const ErrorMechanism* mp : hyper) {
        const auto& dets = mp->detectors;  // sorted
        uint64_t mask = obs_mask_of(mp->observables);
        bool placed = false;

        // Exact two-piece covers made of already-present edges, searched in a
        // deterministic order.
        if (dets.size() == 3) {
            for (size_t i = 0; i < 3 && !placed; i++)
                for (size_t j = i + 1; j < 3 && !placed; j++) {
                    size_t k = 3 - i - j;
                    Endpoints e1 = endpoints_of(dets[i], dets[j]);
                    Endpoints e2 = endpoints_of(dets[k], B);
                    if (!acc.has(e1) || !acc.has(e2)) continue;
                    uint64_t m1 = acc.dominant_mask(e1), m2 = acc.dominant_mask(e2);
                    if ((m1 ^ m2) != mask) continue;
                    acc.fold(e1, m1, mp->p);
                    acc.fold(e2, m2, mp->p);
                    placed = true;
                }
        } else if (dets.size() == 4) {
            constexpr int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
            for (const auto& pr : pairings) {
                Endpoints e1 = endpoints_of(dets[pr[0]], dets[pr[1]]);
                Endpoints e2 = endpoints_of(dets[pr[2]], dets[pr[3]]);
                if (!acc.has(e1) || !acc.has(e2)) continue;
                uint64_t m1 = acc.dominant_mask(e1), m2 = acc.dominant_mask(e2);
                if ((m1 ^ m2) != mask) continue;
                acc.fold(e1, m1, mp->p);
                acc.fold(e2, m2, mp->p);
                placed = true;
                break;
            }
        }

        if (!placed) {
            // Greedy split: consecutive 2-detector pieces plus a boundary
            // remainder, each carrying the mechanism's probability; the first
            // piece takes the observable flip.
            std::ostringstream msg;
            msg << "hyperedge {";
            for (size_t i = 0; i < dets.size(); i++) msg << (i ? "," : "") << "D" << dets[i];
            msg << "} split greedily";
            g.diagnostics.push_back(msg.str());
            for (size_t i = 0; i < dets.size(); i += 2) {
                Endpoints e = i + 1 < dets.size() ? endpoints_of(dets[i], dets[i + 1])
                                                  : endpoints_of(dets[i], B);
                acc.fold(e, i == 0 ? mask : 0, mp->p);
            }
        }
    }

    std::set<uint32_t> node_set;
    for (const auto& [e, by_mask] : acc.buckets) {
        double best_p = -1;
        uint64_t best_mask = 0;
        for (const auto& [mask, p] : by_mask)
            if (p > best_p) {
                best_p = p;
                best_mask = mask;
            }
        if (by_mask.size() > 1)
            g.diagnostics.push_back("parallel edges with conflicting observables at (" +
                                    std::to_string(e.first) + "," + std::to_string(e.second) +
                                    "); kept the most probable");
        if (best_p <= 0) continue;
        double p = best_p;
        if (p > 0.5) {
            g.diagnostics.push_back("edge probability " + format_real(p) +
                                    " above 1/2; weight clamped to 0");
            p = 0.5;
        }
        MatchingGraph::Edge edge;
        edge.u = e.first;
        edge.v = e.second;
        edge.p = best_p;
        edge.weight = std::log((1 - p) / p);
        edge.iweight = std::llround(edge.weight * static_cast<double>(kWeightScale));
        if (edge.iweight < 0) edge.iweight = 0;
        edge.obs_mask = best_mask;
        g.edges.push_back(edge);
        if (e.first != B) node_set.insert(e.first);
        if (e.second != B) node_set.insert(e.second);
    }
    g.nodes.assign(node_set.begin(), node_set.end());
    return g;
}

bool MatchingGraph::connected_to_boundary() const {
    if (nodes.empty()) return true;
    std::map<uint32_t, std::vector<uint32_t>> adj;
    for (const auto& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::set<uint32_t> seen;
    std::vector<uint32_t> stack{boundary_id()};
    while (!stack.empty()) {
        uint32_t u = stack.back();
        stack.pop_back();
        if (!seen.insert(u).second) continue;
        for (uint32_t v : adj[u]) stack.push_back(v);
    }
    for (uint32_t n : nodes)
        if (!seen.count(n)) return false;
    return true;
}

std::string matching_graph_to_csv(const MatchingGraph& g) {
    std::string out = "u,v,weight,p,obs_mask\n";
    auto id = [&](uint32_t v) {
        return v == g.boundary_id() ? std::string("B") : std::to_string(v);
    };
    for (const auto& e : g.edges) {
        out += id(e.u) + "," + id(e.v) + "," + format_real(e.weight) + "," + format_real(e.p) +
               "," + std::to_string(e.obs_mask) + "\n";
    }
    return out;
}

}  // namespace qec
