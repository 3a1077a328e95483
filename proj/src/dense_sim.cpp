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

#include "qecbench/dense_sim.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qecbench/noise.hpp"
#include "qecbench/rng.hpp"

namespace qec {

namespace {

using Amp = std::complex<double>;

struct DenseState {
    uint32_t n;
    std::vector<Amp> amp;

    explicit DenseState(uint32_t num_qubits) : n(num_qubits), amp(1ull << num_qubits, Amp(0, 0)) {
        amp[0] = Amp(1, 0);
    }

    void apply_x(uint32_t q) {
        uint64_t bit = 1ull << q;
        for (uint64_t i = 0; i < amp.size(); i++)
            if (!(i & bit)) std::swap(amp[i], amp[i | bit]);
    }

    void apply_z(uint32_t q) {
        uint64_t bit = 1ull << q;
        for (uint64_t i = 0; i < amp.size(); i++)
            if (i & bit) amp[i] = -amp[i];
    }

    void apply_pauli(uint32_t q, Pauli p) {
        if (pauli_has_x(p)) apply_x(q);
        if (pauli_has_z(p)) apply_z(q);
    }

    void apply_h(uint32_t q) {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        uint64_t bit = 1ull << q;
        for (uint64_t i = 0; i < amp.size(); i++) {
            if (i & bit) continue;
            Amp a = amp[i], b = amp[i | bit];
            amp[i] = (a + b) * inv_sqrt2;
            amp[i | bit] = (a - b) * inv_sqrt2;
        }
    }

    void apply_cx(uint32_t c, uint32_t t) {
        uint64_t cb = 1ull << c, tb = 1ull << t;
        for (uint64_t i = 0; i < amp.size(); i++)
            if ((i & cb) && !(i & tb)) std::swap(amp[i], amp[i | tb]);
    }

    void apply_cz(uint32_t a, uint32_t b) {
        uint64_t ab = 1ull << a, bb = 1ull << b;
        for (uint64_t i = 0; i < amp.size(); i++)
            if ((i & ab) && (i & bb)) amp[i] = -amp[i];
    }

    // Born-rule Z measurement with collapse and renormalization.
    bool measure(uint32_t q, CounterRng& rng) {
        uint64_t bit = 1ull << q;
        double p1 = 0;
        for (uint64_t i = 0; i < amp.size(); i++)
            if (i & bit) p1 += std::norm(amp[i]);
        if (p1 < 0) p1 = 0;
        if (p1 > 1) p1 = 1;
        bool outcome = rng.next_double() < p1;
        double keep = outcome ? p1 : 1 - p1;
        double scale = keep > 0 ? 1.0 / std::sqrt(keep) : 0.0;
        for (uint64_t i = 0; i < amp.size(); i++) {
            bool is_one = (i & bit) != 0;
            if (is_one == outcome)
                amp[i] *= scale;
            else
                amp[i] = Amp(0, 0);
        }
        return outcome;
    }

    void reset(uint32_t q, CounterRng& rng) {
        if (measure(q, rng)) apply_x(q);
    }
};

}  // namespace

ShotBatch dense_oracle_sample(const Circuit& c, uint64_t shots, uint64_t seed) {
    if (c.num_qubits > kDenseOracleMaxQubits)
        throw std::invalid_argument("dense oracle capacity is " +
                                    std::to_string(kDenseOracleMaxQubits) + " qubits");
    auto report = validate(c);
    if (!report.empty())
        throw std::invalid_argument("invalid circuit: " + report.front().message);

    ShotBatch batch(static_cast<uint32_t>(c.num_detectors()),
                    static_cast<uint32_t>(c.num_observables()), shots);
    std::vector<uint8_t> records;
    std::vector<uint8_t> observables;
    for (uint64_t shot = 0; shot < shots; shot++) {
        // High stream bit keeps oracle draws disjoint from sampler draws for
        // the same (seed, shot).
        CounterRng rng(seed, shot | (1ull << 63));
        DenseState state(c.num_qubits);
        records.clear();
        observables.assign(batch.num_observables, 0);
        uint32_t det = 0;
        for (const Instruction& inst : c.instructions) {
            switch (inst.op) {
                case Opcode::H:
                    for (const Target& t : inst.targets) state.apply_h(t.value);
                    break;
                case Opcode::CX:
                    for (size_t k = 0; k + 1 < inst.targets.size(); k += 2)
                        state.apply_cx(inst.targets[k].value, inst.targets[k + 1].value);
                    break;
                case Opcode::CZ:
                    for (size_t k = 0; k + 1 < inst.targets.size(); k += 2)
                        state.apply_cz(inst.targets[k].value, inst.targets[k + 1].value);
                    break;
                case Opcode::R:
                    for (const Target& t : inst.targets) state.reset(t.value, rng);
                    break;
                case Opcode::M:
                    for (const Target& t : inst.targets)
                        records.push_back(state.measure(t.value, rng) ? 1 : 0);
                    break;
                case Opcode::MR:
                    for (const Target& t : inst.targets) {
                        bool r = state.measure(t.value, rng);
                        records.push_back(r ? 1 : 0);
                        if (r) state.apply_x(t.value);
                    }
                    break;
                case Opcode::X_ERROR:
                    for (const Target& t : inst.targets)
                        if (rng.next_bernoulli(inst.arg)) state.apply_x(t.value);
                    break;
                case Opcode::Z_ERROR:
                    for (const Target& t : inst.targets)
                        if (rng.next_bernoulli(inst.arg)) state.apply_z(t.value);
                    break;
                case Opcode::DEPOLARIZE1:
                    for (const Target& t : inst.targets)
                        state.apply_pauli(t.value, sample_depolarize1(inst.arg, rng));
                    break;
                case Opcode::DEPOLARIZE2:
                    for (size_t k = 0; k + 1 < inst.targets.size(); k += 2) {
                        auto [pa, pb] = sample_depolarize2(inst.arg, rng);
                        state.apply_pauli(inst.targets[k].value, pa);
                        state.apply_pauli(inst.targets[k + 1].value, pb);
                    }
                    break;
                case Opcode::TICK:
                    break;
                case Opcode::DETECTOR: {
                    uint8_t v = 0;
                    for (const Target& t : inst.targets) v ^= records[records.size() - t.value];
                    batch.set_detector(shot, det++, v != 0);
                    break;
                }
                case Opcode::OBSERVABLE_INCLUDE: {
                    uint8_t v = 0;
                    for (const Target& t : inst.targets) v ^= records[records.size() - t.value];
                    observables[static_cast<uint32_t>(inst.arg)] ^= v;
                    break;
                }
            }
        }
        for (uint32_t k = 0; k < batch.num_observables; k++)
            batch.set_observable(shot, k, observables[k] != 0);
    }
    return batch;
}

}  // namespace qec
