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

#include "qecbench/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "qecbench/rng.hpp"

namespace qec {

uint64_t ShotBatch::count_detector(uint32_t d) const {
    uint64_t n = 0;
    for (size_t w = 0; w < words_per_row; w++) n += std::popcount(det_row(d)[w]);
    return n;
}

uint64_t ShotBatch::count_observable(uint32_t k) const {
    uint64_t n = 0;
    for (size_t w = 0; w < words_per_row; w++) n += std::popcount(obs_row(k)[w]);
    return n;
}

uint64_t ShotBatch::count_any_detector() const {
    uint64_t n = 0;
    for (size_t w = 0; w < words_per_row; w++) {
        uint64_t any = 0;
        for (uint32_t d = 0; d < num_detectors; d++) any |= det_row(d)[w];
        n += std::popcount(any);
    }
    return n;
}

CompiledCircuit CompiledCircuit::compile(const Circuit& c) {
    auto report = validate(c);
    if (!report.empty())
        throw std::invalid_argument("invalid circuit: instruction " +
                                    std::to_string(report.front().instruction_index) + ": " +
                                    report.front().message);
    CompiledCircuit cc;
    cc.num_qubits = c.num_qubits;
    cc.num_detectors = static_cast<uint32_t>(c.num_detectors());
    cc.num_observables = static_cast<uint32_t>(c.num_observables());

    uint32_t records = 0;
    uint32_t detectors = 0;
    for (const Instruction& inst : c.instructions) {
        switch (inst.op) {
            case Opcode::H:
                for (const Target& t : inst.targets) cc.ops.push_back({K::H, t.value, 0, 0});
                break;
            case Opcode::CX:
            case Opcode::CZ:
                for (size_t k = 0; k + 1 < inst.targets.size(); k += 2)
                    cc.ops.push_back({inst.op == Opcode::CX ? K::CX : K::CZ,
                                      inst.targets[k].value, inst.targets[k + 1].value, 0});
                break;
            case Opcode::R:
                for (const Target& t : inst.targets) cc.ops.push_back({K::R, t.value, 0, 0});
                break;
            case Opcode::M:
            case Opcode::MR:
                for (const Target& t : inst.targets) {
                    cc.ops.push_back(
                        {inst.op == Opcode::M ? K::M : K::MR, t.value, records, 0});
                    records++;
                }
                break;
            case Opcode::X_ERROR:
            case Opcode::Z_ERROR:
            case Opcode::DEPOLARIZE1:
                for (const Target& t : inst.targets) {
                    uint32_t site = static_cast<uint32_t>(cc.sites.size());
                    cc.sites.push_back({inst.arg, inst.op});
                    cc.ops.push_back({K::Noise1, t.value, site, 0});
                }
                break;
            case Opcode::DEPOLARIZE2:
                for (size_t k = 0; k + 1 < inst.targets.size(); k += 2) {
                    uint32_t site = static_cast<uint32_t>(cc.sites.size());
                    cc.sites.push_back({inst.arg, inst.op});
                    cc.ops.push_back({K::Noise2, inst.targets[k].value,
                                      inst.targets[k + 1].value, site});
                }
                break;
            case Opcode::TICK:
                break;
            case Opcode::DETECTOR: {
                uint32_t off = static_cast<uint32_t>(cc.refs.size());
                for (const Target& t : inst.targets) cc.refs.push_back(records - t.value);
                cc.ops.push_back({K::Det, detectors++, off,
                                  static_cast<uint32_t>(inst.targets.size())});
                break;
            }
            case Opcode::OBSERVABLE_INCLUDE: {
                uint32_t off = static_cast<uint32_t>(cc.refs.size());
                for (const Target& t : inst.targets) cc.refs.push_back(records - t.value);
                cc.ops.push_back({K::Obs, static_cast<uint32_t>(inst.arg), off,
                                  static_cast<uint32_t>(inst.targets.size())});
                break;
            }
        }
    }
    cc.num_records = records;

    for (uint32_t s = 0; s < cc.sites.size(); s++) {
        if (!cc.runs.empty() && cc.runs.back().p == cc.sites[s].p &&
            cc.runs.back().first + cc.runs.back().count == s) {
            cc.runs.back().count++;
        } else {
            cc.runs.push_back({s, 1, cc.sites[s].p});
        }
    }
    return cc;
}

void sample_shot_plan(const CompiledCircuit& cc, uint64_t seed, uint64_t shot, uint8_t lane,
                      std::vector<PlanEntry>& out) {
    CounterRng rng(seed, shot);
    auto fire = [&](uint32_t site) {
        PlanEntry e{site, lane, 0, 0};
        switch (cc.sites[site].channel) {
            case Opcode::X_ERROR: e.pa = 1; break;
            case Opcode::Z_ERROR: e.pa = 2; break;
            case Opcode::DEPOLARIZE1: e.pa = static_cast<uint8_t>(1 + rng.next_below(3)); break;
            case Opcode::DEPOLARIZE2: {
                uint64_t v = 1 + rng.next_below(15);
                e.pa = static_cast<uint8_t>(v & 3u);
                e.pb = static_cast<uint8_t>((v >> 2) & 3u);
                break;
            }
            default: break;
        }
        out.push_back(e);
    };
    for (const CompiledCircuit::Run& run : cc.runs) {
        if (run.p <= 0.0) continue;
        if (run.p >= 1.0) {
            for (uint32_t k = 0; k < run.count; k++) fire(run.first + k);
            continue;
        }
        // Geometric skipping: cost is proportional to the number of fired
        // sites, not the number of sites.
        const double log1mp = std::log1p(-run.p);
        uint64_t pos = 0;
        for (;;) {
            double u = rng.next_double_nz();
            double skip = std::floor(std::log(u) / log1mp);
            if (skip >= static_cast<double>(run.count - pos)) break;
            pos += static_cast<uint64_t>(skip);
            fire(run.first + static_cast<uint32_t>(pos));
            pos++;
            if (pos >= run.count) break;
        }
    }
}

void FrameBlock::run(const CompiledCircuit& cc, const std::vector<PlanEntry>& plan) {
    using K = CompiledCircuit::K;
    frame_x.assign(cc.num_qubits, 0);
    frame_z.assign(cc.num_qubits, 0);
    records.assign(cc.num_records, 0);
    detectors.assign(cc.num_detectors, 0);
    observables.assign(cc.num_observables, 0);

    size_t cursor = 0;
    auto apply_plan = [&](uint32_t site, uint32_t qa, uint32_t qb) {
        while (cursor < plan.size() && plan[cursor].site == site) {
            const PlanEntry& e = plan[cursor++];
            uint64_t bit = 1ull << e.lane;
            if (e.pa & 1u) frame_x[qa] ^= bit;
            if (e.pa & 2u) frame_z[qa] ^= bit;
            if (e.pb & 1u) frame_x[qb] ^= bit;
            if (e.pb & 2u) frame_z[qb] ^= bit;
        }
    };

    for (const CompiledCircuit::Op& op : cc.ops) {
        switch (op.kind) {
            case K::H:
                std::swap(frame_x[op.a], frame_z[op.a]);
                break;
            case K::CX:
                frame_x[op.b] ^= frame_x[op.a];
                frame_z[op.a] ^= frame_z[op.b];
                break;
            case K::CZ:
                frame_z[op.b] ^= frame_x[op.a];
                frame_z[op.a] ^= frame_x[op.b];
                break;
            case K::R:
                frame_x[op.a] = 0;
                frame_z[op.a] = 0;
                break;
            case K::M:
                records[op.b] = frame_x[op.a];
                break;
            case K::MR:
                records[op.b] = frame_x[op.a];
                frame_x[op.a] = 0;
                frame_z[op.a] = 0;
                break;
            case K::Noise1:
                apply_plan(op.b, op.a, op.a);
                break;
            case K::Noise2:
                apply_plan(op.c, op.a, op.b);
                break;
            case K::Det: {
                uint64_t w = 0;
                for (uint32_t k = 0; k < op.c; k++) w ^= records[cc.refs[op.b + k]];
                detectors[op.a] = w;
                break;
            }
            case K::Obs: {
                uint64_t w = 0;
                for (uint32_t k = 0; k < op.c; k++) w ^= records[cc.refs[op.b + k]];
                observables[op.a] ^= w;
                break;
            }
        }
    }
}

namespace {

void sample_block_range(const CompiledCircuit& cc, uint64_t first_shot, uint64_t shots,
                        uint64_t seed, ShotBatch& batch, size_t word_begin, size_t word_end) {
    FrameBlock block;
    std::vector<PlanEntry> plan;
    for (size_t w = word_begin; w < word_end; w++) {
        uint64_t base = static_cast<uint64_t>(w) * 64;
        uint32_t lanes = static_cast<uint32_t>(std::min<uint64_t>(64, shots - base));
        plan.clear();
        for (uint32_t lane = 0; lane < lanes; lane++)
            sample_shot_plan(cc, seed, first_shot + base + lane, static_cast<uint8_t>(lane), plan);
        std::stable_sort(plan.begin(), plan.end(),
                         [](const PlanEntry& a, const PlanEntry& b) { return a.site < b.site; });
        block.run(cc, plan);
        uint64_t mask = lanes == 64 ? ~0ull : ((1ull << lanes) - 1);
        for (uint32_t d = 0; d < cc.num_detectors; d++)
            batch.det_row(d)[w] = block.detectors[d] & mask;
        for (uint32_t k = 0; k < cc.num_observables; k++)
            batch.obs_row(k)[w] = block.observables[k] & mask;
    }
}

}  // namespace

ShotBatch sample_range(const CompiledCircuit& cc, uint64_t first_shot, uint64_t shots,
                       uint64_t seed, int workers) {
    ShotBatch batch(cc.num_detectors, cc.num_observables, shots);
    if (shots == 0) return batch;
    size_t words = batch.words_per_row;
    if (workers <= 1 || words == 1) {
        sample_block_range(cc, first_shot, shots, seed, batch, 0, words);
        return batch;
    }
    size_t n = std::min<size_t>(static_cast<size_t>(workers), words);
    std::vector<std::thread> pool;
    for (size_t t = 0; t < n; t++) {
        size_t begin = words * t / n, end = words * (t + 1) / n;
        pool.emplace_back([&, begin, end] {
            sample_block_range(cc, first_shot, shots, seed, batch, begin, end);
        });
    }
    for (auto& th : pool) th.join();
    return batch;
}

ShotBatch sample_range(const Circuit& c, uint64_t first_shot, uint64_t shots, uint64_t seed,
                       int workers) {
    return sample_range(CompiledCircuit::compile(c), first_shot, shots, seed, workers);
}

ShotBatch sample_batch(const Circuit& c, uint64_t shots, uint64_t seed, int workers) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    return sample_range(c, 0, shots, seed, workers);
}

uint64_t logical_error_count(const ShotBatch& batch, const ShotBatch& predictions) {
    if (predictions.shots != batch.shots || predictions.num_observables != batch.num_observables)
        throw std::invalid_argument("prediction shape does not match batch");
    uint64_t n = 0;
    size_t words = batch.words_per_row;
    uint64_t tail_bits = batch.shots & 63;
    for (size_t w = 0; w < words; w++) {
        uint64_t diff = 0;
        for (uint32_t k = 0; k < batch.num_observables; k++)
            diff |= batch.obs_row(k)[w] ^ predictions.obs_row(k)[w];
        if (w + 1 == words && tail_bits) diff &= (1ull << tail_bits) - 1;
        n += std::popcount(diff);
    }
    return n;
}

namespace {

void put_u64(std::ostream& out, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; i++) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("truncated raw batch header");
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

void write_matrix(std::ostream& out, const ShotBatch& b, bool detectors) {
    uint32_t rows = detectors ? b.num_detectors : b.num_observables;
    size_t bytes_per_shot = (rows + 7) / 8;
    std::vector<unsigned char> buf(bytes_per_shot);
    for (uint64_t s = 0; s < b.shots; s++) {
        std::fill(buf.begin(), buf.end(), 0);
        for (uint32_t r = 0; r < rows; r++) {
            bool v = detectors ? b.detector(s, r) : b.observable(s, r);
            if (v) buf[r >> 3] |= static_cast<unsigned char>(1u << (r & 7));
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
}

void read_matrix(std::istream& in, ShotBatch& b, bool detectors) {
    uint32_t rows = detectors ? b.num_detectors : b.num_observables;
    size_t bytes_per_shot = (rows + 7) / 8;
    std::vector<unsigned char> buf(bytes_per_shot);
    for (uint64_t s = 0; s < b.shots; s++) {
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!in && bytes_per_shot) throw std::runtime_error("truncated raw batch body");
        for (uint32_t r = 0; r < rows; r++) {
            bool v = (buf[r >> 3] >> (r & 7)) & 1u;
            if (detectors)
                b.set_detector(s, r, v);
            else
                b.set_observable(s, r, v);
        }
    }
}

}  // namespace

void write_raw_batch(const ShotBatch& batch, std::ostream& out) {
    put_u64(out, batch.shots);
    put_u64(out, batch.num_detectors);
    put_u64(out, batch.num_observables);
    write_matrix(out, batch, true);
    write_matrix(out, batch, false);
}

ShotBatch read_raw_batch(std::istream& in) {
    uint64_t shots = get_u64(in);
    uint64_t dets = get_u64(in);
    uint64_t obs = get_u64(in);
    ShotBatch b(static_cast<uint32_t>(dets), static_cast<uint32_t>(obs), shots);
    read_matrix(in, b, true);
    read_matrix(in, b, false);
    return b;
}

}  // namespace qec
