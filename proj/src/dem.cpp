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

#include "qecbench/dem.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "qecbench/sim.hpp"

namespace qec {

namespace {

double xor_probability(double p, double q) { return p * (1 - q) + q * (1 - p); }

using Signature = std::pair<std::vector<uint32_t>, std::vector<uint32_t>>;

DetectorErrorModel finalize(std::map<Signature, double>&& merged, uint32_t num_detectors,
                            uint32_t num_observables) {
    DetectorErrorModel dem;
    dem.num_detectors = num_detectors;
    dem.num_observables = num_observables;
    for (auto& [sig, p] : merged) {
        if (p <= 0) continue;
        if (sig.first.empty() && sig.second.empty()) continue;
        dem.mechanisms.push_back({p, sig.first, sig.second});
    }
    return dem;
}

}  // namespace

DetectorErrorModel extract_dem(const Circuit& noisy) {
    CompiledCircuit cc = CompiledCircuit::compile(noisy);

    // Enumerate the elementary cases of every site, in site order.
    struct Case {
        uint32_t site;
        uint8_t pa, pb;
        double p;
    };
    std::vector<Case> cases;
    for (uint32_t s = 0; s < cc.sites.size(); s++) {
        const auto& site = cc.sites[s];
        if (site.p <= 0) continue;
        switch (site.channel) {
            case Opcode::X_ERROR:
                cases.push_back({s, 1, 0, site.p});
                break;
            case Opcode::Z_ERROR:
                cases.push_back({s, 2, 0, site.p});
                break;
            case Opcode::DEPOLARIZE1:
                for (uint8_t pa : {1, 2, 3}) cases.push_back({s, pa, 0, site.p / 3});
                break;
            case Opcode::DEPOLARIZE2:
                for (uint8_t v = 1; v < 16; v++)
                    cases.push_back({s, static_cast<uint8_t>(v & 3u),
                                     static_cast<uint8_t>((v >> 2) & 3u), site.p / 15});
                break;
            default:
                break;
        }
    }

    std::map<Signature, double> merged;
    FrameBlock block;
    std::vector<PlanEntry> plan;
    for (size_t base = 0; base < cases.size(); base += 64) {
        size_t lanes = std::min<size_t>(64, cases.size() - base);
        plan.clear();
        for (size_t lane = 0; lane < lanes; lane++) {
            const Case& cs = cases[base + lane];
            plan.push_back({cs.site, static_cast<uint8_t>(lane), cs.pa, cs.pb});
        }
        block.run(cc, plan);
        for (size_t lane = 0; lane < lanes; lane++) {
            Signature sig;
            uint64_t bit = 1ull << lane;
            for (uint32_t d = 0; d < cc.num_detectors; d++)
                if (block.detectors[d] & bit) sig.first.push_back(d);
            for (uint32_t k = 0; k < cc.num_observables; k++)
                if (block.observables[k] & bit) sig.second.push_back(k);
            if (sig.first.empty() && sig.second.empty()) continue;
            auto [it, inserted] = merged.try_emplace(std::move(sig), cases[base + lane].p);
            if (!inserted) it->second = xor_probability(it->second, cases[base + lane].p);
        }
    }
    return finalize(std::move(merged), cc.num_detectors, cc.num_observables);
}

std::string dem_to_text(const DetectorErrorModel& dem) {
    std::string out;
    for (const auto& m : dem.mechanisms) {
        out += "error(" + format_real(m.p) + ")";
        for (uint32_t d : m.detectors) out += " D" + std::to_string(d);
        for (uint32_t k : m.observables) out += " L" + std::to_string(k);
        out += '\n';
    }
    return out;
}

DetectorErrorModel dem_from_text(const std::string& text) {
    DetectorErrorModel dem;
    std::istringstream is(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(is, line)) {
        line_no++;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head.rfind("error(", 0) != 0 || head.back() != ')')
            throw ParseError(line_no, "expected error(p)");
        double p = std::strtod(head.substr(6, head.size() - 7).c_str(), nullptr);
        ErrorMechanism m;
        m.p = p;
        std::string tok;
        while (ls >> tok) {
            if (tok.size() < 2 || (tok[0] != 'D' && tok[0] != 'L'))
                throw ParseError(line_no, "bad target '" + tok + "'");
            uint32_t v = static_cast<uint32_t>(std::strtoul(tok.c_str() + 1, nullptr, 10));
            if (tok[0] == 'D') {
                m.detectors.push_back(v);
                dem.num_detectors = std::max(dem.num_detectors, v + 1);
            } else {
                m.observables.push_back(v);
                dem.num_observables = std::max(dem.num_observables, v + 1);
            }
        }
        std::sort(m.detectors.begin(), m.detectors.end());
        std::sort(m.observables.begin(), m.observables.end());
        dem.mechanisms.push_back(std::move(m));
    }
    std::sort(dem.mechanisms.begin(), dem.mechanisms.end(), [](const auto& a, const auto& b) {
        return std::tie(a.detectors, a.observables) < std::tie(b.detectors, b.observables);
    });
    return dem;
}

SplitResult split_xz(const DetectorErrorModel& dem, const std::vector<bool>& detector_is_x,
                     bool obs_half_is_x) {
    if (detector_is_x.size() < dem.num_detectors)
        throw std::invalid_argument("detector classification shorter than detector count");
    SplitResult out;
    std::map<Signature, double> x_merged, z_merged;
    auto fold = [](std::map<Signature, double>& m, Signature sig, double p) {
        auto [it, inserted] = m.try_emplace(std::move(sig), p);
        if (!inserted) it->second = xor_probability(it->second, p);
    };

    for (const auto& mech : dem.mechanisms) {
        std::vector<uint32_t> dx, dz;
        for (uint32_t d : mech.detectors)
            (detector_is_x[d] ? dx : dz).push_back(d);
        bool spans_both = !dx.empty() && !dz.empty();
        if (spans_both && (dx.size() > 2 || dz.size() > 2)) {
            std::ostringstream msg;
            msg << "mechanism spans both classes with " << dx.size() << " X / " << dz.size()
                << " Z detectors";
            out.diagnostics.push_back(msg.str());
        }
        // The observable flip travels with the preferred half when that half
        // sees the mechanism at all, otherwise with whichever half does.
        bool obs_to_x;
        if (mech.observables.empty())
            obs_to_x = obs_half_is_x;
        else if (obs_half_is_x)
            obs_to_x = !dx.empty() || dz.empty();
        else
            obs_to_x = dz.empty() && !dx.empty();
        if (!mech.observables.empty() && obs_to_x != obs_half_is_x)
            out.diagnostics.push_back("observable flip re-homed to the opposite half");

        if (!dx.empty() || (obs_to_x && !mech.observables.empty()))
            fold(x_merged, {dx, obs_to_x ? mech.observables : std::vector<uint32_t>{}}, mech.p);
        if (!dz.empty() || (!obs_to_x && !mech.observables.empty()))
            fold(z_merged, {dz, obs_to_x ? std::vector<uint32_t>{} : mech.observables}, mech.p);
    }
    out.x_dem = finalize(std::move(x_merged), dem.num_detectors, dem.num_observables);
    out.z_dem = finalize(std::move(z_merged), dem.num_detectors, dem.num_observables);
    return out;
}

SplitResult split_xz(const DetectorErrorModel& dem, const GeneratedCircuit& g) {
    std::vector<bool> is_x(dem.num_detectors, false);
    for (size_t d = 0; d < g.detectors.size() && d < is_x.size(); d++)
        is_x[d] = g.detectors[d].is_x_class;
    return split_xz(dem, is_x, g.spec.basis == Basis::X);
}

}  // namespace qec
