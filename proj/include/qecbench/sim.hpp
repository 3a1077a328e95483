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

#ifndef QECBENCH_SIM_HPP
#define QECBENCH_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qecbench/circuit.hpp"

namespace qec {

// Detector/observable sample bits for a batch of shots. Detector-major,
// 64 shots per word, so per-detector statistics are popcounts.
struct ShotBatch {
    uint64_t shots = 0;
    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;
    size_t words_per_row = 0;
    std::vector<uint64_t> det_bits;  // [num_detectors][words_per_row]
    std::vector<uint64_t> obs_bits;  // [num_observables][words_per_row]

    ShotBatch() = default;
    ShotBatch(uint32_t num_det, uint32_t num_obs, uint64_t num_shots)
        : shots(num_shots),
          num_detectors(num_det),
          num_observables(num_obs),
          words_per_row((num_shots + 63) / 64),
          det_bits(static_cast<size_t>(num_det) * ((num_shots + 63) / 64), 0),
          obs_bits(static_cast<size_t>(num_obs) * ((num_shots + 63) / 64), 0) {}

    uint64_t* det_row(uint32_t d) { return det_bits.data() + static_cast<size_t>(d) * words_per_row; }
    const uint64_t* det_row(uint32_t d) const {
        return det_bits.data() + static_cast<size_t>(d) * words_per_row;
    }
    uint64_t* obs_row(uint32_t k) { return obs_bits.data() + static_cast<size_t>(k) * words_per_row; }
    const uint64_t* obs_row(uint32_t k) const {
        return obs_bits.data() + static_cast<size_t>(k) * words_per_row;
    }

    bool detector(uint64_t shot, uint32_t d) const {
        return (det_row(d)[shot >> 6] >> (shot & 63)) & 1u;
    }
    bool observable(uint64_t shot, uint32_t k) const {
        return (obs_row(k)[shot >> 6] >> (shot & 63)) & 1u;
    }
    void set_detector(uint64_t shot, uint32_t d, bool v) {
        uint64_t m = 1ull << (shot & 63);
        if (v) det_row(d)[shot >> 6] |= m; else det_row(d)[shot >> 6] &= ~m;
    }
    void set_observable(uint64_t shot, uint32_t k, bool v) {
        uint64_t m = 1ull << (shot & 63);
        if (v) obs_row(k)[shot >> 6] |= m; else obs_row(k)[shot >> 6] &= ~m;
    }

    uint64_t count_detector(uint32_t d) const;
    uint64_t count_observable(uint32_t k) const;
    uint64_t count_any_detector() const;  // shots with >= 1 fired detector
};

// Lowered instruction stream: pair gates unrolled, record back-references
// resolved to absolute measurement indices, noise targets enumerated as
// Bernoulli "sites" in execution order.
struct CompiledCircuit {
    enum class K : uint8_t { H, CX, CZ, R, M, MR, Noise1, Noise2, Det, Obs };
    struct Op {
        K kind;
        uint32_t a = 0, b = 0, c = 0;
        // H/R: a=q. CX/CZ: a,b = pair. M/MR: a=q, b=record index.
        // Noise1: a=q, b=site. Noise2: a,b=pair, c=site.
        // Det: a=detector index, b=ref offset, c=ref count.
        // Obs: a=observable index, b=ref offset, c=ref count.
    };
    struct Site {
        double p;
        Opcode channel;
    };
    struct Run {  // maximal site range with a common fire probability
        uint32_t first = 0, count = 0;
        double p = 0;
    };

    uint32_t num_qubits = 0;
    uint32_t num_records = 0;
    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;
    std::vector<Op> ops;
    std::vector<uint32_t> refs;  // absolute record indices for Det/Obs
    std::vector<Site> sites;
    std::vector<Run> runs;

    static CompiledCircuit compile(const Circuit& c);
};

// One sampled (or forced) error: Pauli codes use bit0 = X flip, bit1 = Z
// flip; pb applies to the second qubit of a two-qubit site.
struct PlanEntry {
    uint32_t site;
    uint8_t lane;
    uint8_t pa;
    uint8_t pb;
};

// Executes up to 64 shots ("lanes") at once over word-packed frames, with
// per-lane errors supplied by `plan` (sorted by site, then lane).
struct FrameBlock {
    std::vector<uint64_t> frame_x, frame_z;  // per qubit, one bit per lane
    std::vector<uint64_t> records;           // per measurement
    std::vector<uint64_t> detectors;         // per detector
    std::vector<uint64_t> observables;       // per observable
    void run(const CompiledCircuit& cc, const std::vector<PlanEntry>& plan);
};

// Samples the per-shot error plan for one absolute shot index. The stream is
// a pure function of (seed, shot), which makes results independent of how
// shots are split into blocks or across workers. Entries are appended in
// site order.
void sample_shot_plan(const CompiledCircuit& cc, uint64_t seed, uint64_t shot, uint8_t lane,
                      std::vector<PlanEntry>& out);

// Monte Carlo frame sampling of [first_shot, first_shot + shots). Shot k of
// the result is absolute shot first_shot + k.
ShotBatch sample_range(const Circuit& c, uint64_t first_shot, uint64_t shots, uint64_t seed,
                       int workers = 1);
ShotBatch sample_range(const CompiledCircuit& cc, uint64_t first_shot, uint64_t shots,
                       uint64_t seed, int workers = 1);

// Deterministic function of (circuit, shots, seed).
ShotBatch sample_batch(const Circuit& c, uint64_t shots, uint64_t seed, int workers = 1);

// Number of shots whose predicted observables differ from the actual ones in
// any bit. Shapes must match.
uint64_t logical_error_count(const ShotBatch& batch, const ShotBatch& predictions);

// Raw batch dump: header (shots, num_detectors, num_observables as
// little-endian u64) then the shot-major bit-packed detector matrix
// (ceil(D/8) bytes per shot) followed by the observable matrix.
void write_raw_batch(const ShotBatch& batch, std::ostream& out);
ShotBatch read_raw_batch(std::istream& in);

}  // namespace qec

#endif
