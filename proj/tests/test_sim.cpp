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

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "qecbench/codegen.hpp"
#include "qecbench/dense_sim.hpp"
#include "qecbench/noise.hpp"

using namespace qec;

namespace {

// Two-sample chi-square over k categories; returns the statistic.
double chi2_stat(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    double na = 0, nb = 0;
    for (uint64_t v : a) na += static_cast<double>(v);
    for (uint64_t v : b) nb += static_cast<double>(v);
    double total = na + nb;
    double stat = 0;
    for (size_t k = 0; k < a.size(); k++) {
        double col = static_cast<double>(a[k]) + static_cast<double>(b[k]);
        if (col == 0) continue;
        double ea = col * na / total, eb = col * nb / total;
        stat += (a[k] - ea) * (a[k] - ea) / ea;
        stat += (b[k] - eb) * (b[k] - eb) / eb;
    }
    return stat;
}

constexpr double kChi2Crit1 = 10.828;  // df=1, alpha=1e-3
constexpr double kChi2Crit3 = 16.266;  // df=3, alpha=1e-3

void check_marginals_and_pairs(const ShotBatch& a, const ShotBatch& b) {
    REQUIRE(a.num_detectors == b.num_detectors);
    for (uint32_t d = 0; d < a.num_detectors; d++) {
        uint64_t fa = a.count_detector(d), fb = b.count_detector(d);
        double stat = chi2_stat({fa, a.shots - fa}, {fb, b.shots - fb});
        CHECK(stat < kChi2Crit1);
    }
    for (uint32_t i = 0; i < a.num_detectors; i++) {
        for (uint32_t j = i + 1; j < a.num_detectors; j++) {
            std::vector<uint64_t> ca(4, 0), cb(4, 0);
            for (uint64_t s = 0; s < a.shots; s++)
                ca[(a.detector(s, i) ? 2 : 0) + (a.detector(s, j) ? 1 : 0)]++;
            for (uint64_t s = 0; s < b.shots; s++)
                cb[(b.detector(s, i) ? 2 : 0) + (b.detector(s, j) ? 1 : 0)]++;
            CHECK(chi2_stat(ca, cb) < kChi2Crit3);
        }
    }
}

}  // namespace

TEST_CASE("noiseless memory circuit samples to all-zero") {
    auto g = build_rotated_surface({CodeFamily::Rotated, 3, 9, Basis::Z});
    ShotBatch batch = sample_batch(g.circuit, 10000, 11);
    CHECK(batch.count_any_detector() == 0);
    CHECK(batch.count_observable(0) == 0);
}

TEST_CASE("forced bulk X between rounds fires exactly the two adjacent Z detectors") {
    auto g = build_rotated_surface({CodeFamily::Rotated, 3, 9, Basis::Z});
    // Center data qubit (3,3); its Z-plaquettes are the cells at (2,2), (4,4).
    uint32_t center = g.layout.data_qubits.at(Coord{3, 3});
    std::vector<uint32_t> adjacent_z;
    for (const auto& [c, anc] : g.layout.z_ancillas)
        for (uint32_t q : g.layout.plaquettes.at(anc))
            if (q == center) adjacent_z.push_back(anc);
    REQUIRE(adjacent_z.size() == 2);

    // Insert the error just before the 5th round's TICK (rounds are 0-based;
    // the flip lands between round 3 and round 4).
    size_t tick_count = 0, posn = 0;
    for (size_t i = 0; i < g.circuit.instructions.size(); i++) {
        if (g.circuit.instructions[i].op == Opcode::TICK && ++tick_count == 5) {
            posn = i;
            break;
        }
    }
    Circuit broken;
    broken.num_qubits = g.circuit.num_qubits;
    broken.coords = g.circuit.coords;
    for (size_t i = 0; i <= g.circuit.instructions.size(); i++) {
        if (i == posn) {
            Instruction e;
            e.op = Opcode::X_ERROR;
            e.has_arg = true;
            e.arg = 1.0;
            e.targets = {Target::qubit(center)};
            broken.instructions.push_back(e);
        }
        if (i < g.circuit.instructions.size()) broken.instructions.push_back(g.circuit.instructions[i]);
    }

    std::vector<uint32_t> expected;
    for (uint32_t d = 0; d < g.detectors.size(); d++)
        if (g.detectors[d].round == 4 &&
            (g.detectors[d].ancilla == adjacent_z[0] || g.detectors[d].ancilla == adjacent_z[1]))
            expected.push_back(d);
    REQUIRE(expected.size() == 2);

    ShotBatch batch = sample_batch(broken, 256, 77);
    for (uint32_t d = 0; d < batch.num_detectors; d++) {
        bool should_fire = d == expected[0] || d == expected[1];
        CHECK(batch.count_detector(d) == (should_fire ? batch.shots : 0));
    }
    CHECK(batch.count_observable(0) == 0);
}

TEST_CASE("frame Bernoulli marginals across a long run of sites") {
    // 20 independent X_ERROR(0.3) sites exercise the geometric skipping.
    Circuit c;
    std::vector<uint32_t> qs;
    for (uint32_t q = 0; q < 20; q++) qs.push_back(q);
    c.append(Opcode::R, qs);
    c.append_arg(Opcode::X_ERROR, 0.3, qs);
    c.append(Opcode::M, qs);
    for (uint32_t q = 0; q < 20; q++) {
        Instruction det;
        det.op = Opcode::DETECTOR;
        det.targets = {Target::rec(20 - q)};
        c.append(det);
    }
    const uint64_t shots = 200000;
    ShotBatch batch = sample_batch(c, shots, 5);
    for (uint32_t d = 0; d < 20; d++) {
        double freq = static_cast<double>(batch.count_detector(d)) / shots;
        double sigma = std::sqrt(0.3 * 0.7 / shots);
        CHECK(std::abs(freq - 0.3) < 4 * sigma);
    }
}

TEST_CASE("MR records then clears the frame") {
    Circuit c = parse_circuit(
        "R 0\n"
        "X_ERROR(1) 0\n"
        "MR 0\n"
        "M 0\n"
        "DETECTOR rec[-2]\n"
        "DETECTOR rec[-1]\n");
    ShotBatch batch = sample_batch(c, 64, 1);
    CHECK(batch.count_detector(0) == 64);  // flipped readout
    CHECK(batch.count_detector(1) == 0);   // reset wiped the flip
}

TEST_CASE("partitionability: split sampling concatenates exactly") {
    auto g = build_repetition({CodeFamily::Repetition, 3, 9, Basis::Z});
    InjectionOptions opts;
    opts.data_qubits = g.data_qubits;
    Circuit noisy = apply_noise_model(g.circuit, NoiseModel::CircuitLevel, 0.05, opts);

    const uint64_t total = 1000, split = 173;
    ShotBatch whole = sample_batch(noisy, total, 31337);
    ShotBatch head = sample_range(noisy, 0, split, 31337);
    ShotBatch tail = sample_range(noisy, split, total - split, 31337);
    for (uint64_t s = 0; s < total; s++) {
        const ShotBatch& part = s < split ? head : tail;
        uint64_t ps = s < split ? s : s - split;
        for (uint32_t d = 0; d < whole.num_detectors; d++)
            REQUIRE(whole.detector(s, d) == part.detector(ps, d));
        REQUIRE(whole.observable(s, 0) == part.observable(ps, 0));
    }

    SUBCASE("worker count does not change bits") {
        ShotBatch two = sample_batch(noisy, total, 31337, 2);
        CHECK(two.det_bits == whole.det_bits);
        CHECK(two.obs_bits == whole.obs_bits);
    }
    SUBCASE("same seed reproduces, different seed does not") {
        ShotBatch again = sample_batch(noisy, total, 31337);
        CHECK(again.det_bits == whole.det_bits);
        ShotBatch other = sample_batch(noisy, total, 31338);
        CHECK(other.det_bits != whole.det_bits);
    }
}

TEST_CASE("dense oracle: Bell-pair parity is deterministic") {
    Circuit c = parse_circuit(
        "R 0\nR 1\n"
        "H 0\n"
        "CX 0 1\n"
        "M 0\nM 1\n"
        "DETECTOR rec[-1] rec[-2]\n");
    ShotBatch batch = dense_oracle_sample(c, 2000, 9);
    CHECK(batch.count_detector(0) == 0);
}

TEST_CASE("dense oracle: X_ERROR(0.5) marginal") {
    Circuit c = parse_circuit(
        "R 0\n"
        "X_ERROR(0.5) 0\n"
        "M 0\n"
        "DETECTOR rec[-1]\n");
    const uint64_t shots = 100000;
    ShotBatch batch = dense_oracle_sample(c, shots, 7);
    double freq = static_cast<double>(batch.count_detector(0)) / shots;
    CHECK(std::abs(freq - 0.5) < 4 * std::sqrt(0.25 / shots));
}

TEST_CASE("dense oracle enforces its qubit capacity") {
    auto g = build_rotated_surface({CodeFamily::Rotated, 3, 1, Basis::Z});
    CHECK_THROWS_AS(dense_oracle_sample(g.circuit, 1, 0), std::invalid_argument);
}

TEST_CASE("frame sampler agrees with dense oracle in distribution") {
    const uint64_t shots = 100000;
    auto rep = build_repetition({CodeFamily::Repetition, 3, 2, Basis::Z});
    InjectionOptions opts;
    opts.data_qubits = rep.data_qubits;

    SUBCASE("repetition memory under depolarizing p=0.1") {
        Circuit noisy = apply_error_type(rep.circuit, ErrorType::Depolarizing, 0.1, opts);
        check_marginals_and_pairs(sample_batch(noisy, shots, 1234, 2),
                                  dense_oracle_sample(noisy, shots, 555));
    }
    SUBCASE("repetition memory under circuit-level p=0.2") {
        Circuit noisy = apply_noise_model(rep.circuit, NoiseModel::CircuitLevel, 0.2, opts);
        check_marginals_and_pairs(sample_batch(noisy, shots, 2345, 2),
                                  dense_oracle_sample(noisy, shots, 556));
    }
    SUBCASE("hand-mixed channels incl. CZ and Hadamard") {
        // Noise sits inside Clifford sandwiches that leave every noiselessly
        // referenced parity deterministic (the frame-simulation contract).
        Circuit c = parse_circuit(
            "R 0 1 2 3\n"
            "H 0\n"
            "CZ 0 1\n"
            "DEPOLARIZE1(0.3) 0 1\n"
            "CZ 0 1\n"
            "H 0\n"
            "H 2\n"
            "CX 2 3\n"
            "DEPOLARIZE2(0.5) 2 3\n"
            "CX 2 3\n"
            "H 2\n"
            "Z_ERROR(0.25) 1\n"
            "X_ERROR(0.1) 3\n"
            "M 0 1 2 3\n"
            "DETECTOR rec[-4]\n"
            "DETECTOR rec[-3]\n"
            "DETECTOR rec[-2]\n"
            "DETECTOR rec[-1]\n"
            "OBSERVABLE_INCLUDE(0) rec[-1] rec[-2]\n");
        ShotBatch fa = sample_batch(c, shots, 777, 2);
        ShotBatch fb = dense_oracle_sample(c, shots, 888);
        check_marginals_and_pairs(fa, fb);
        uint64_t oa = fa.count_observable(0), ob = fb.count_observable(0);
        CHECK(chi2_stat({oa, shots - oa}, {ob, shots - ob}) < kChi2Crit1);
    }
}

TEST_CASE("logical_error_count") {
    auto g = build_repetition({CodeFamily::Repetition, 3, 3, Basis::Z});
    InjectionOptions opts;
    opts.data_qubits = g.data_qubits;
    Circuit noisy = apply_noise_model(g.circuit, NoiseModel::CircuitLevel, 0.3, opts);
    ShotBatch batch = sample_batch(noisy, 1000, 3);

    SUBCASE("matching predictions count zero") {
        CHECK(logical_error_count(batch, batch) == 0);
    }
    SUBCASE("all-zero predictions count the observable flips") {
        ShotBatch zero(0, batch.num_observables, batch.shots);
        CHECK(logical_error_count(batch, zero) == batch.count_observable(0));
        CHECK(logical_error_count(batch, zero) > 0);
    }
    SUBCASE("all-ones predictions vs all-ones observables") {
        ShotBatch ones(0, 1, 10);
        ShotBatch actual(0, 1, 10);
        for (uint64_t s = 0; s < 10; s++) actual.set_observable(s, 0, true);
        CHECK(logical_error_count(actual, ones) == 10);  // ones has obs=0... filled below
        for (uint64_t s = 0; s < 10; s++) ones.set_observable(s, 0, true);
        CHECK(logical_error_count(actual, ones) == 0);
    }
    SUBCASE("hand-recount on a small random case") {
        ShotBatch a(0, 2, 10), b(0, 2, 10);
        CounterRng rng(9, 9);
        uint64_t expected = 0;
        for (uint64_t s = 0; s < 10; s++) {
            bool a0 = rng.next_below(2), a1 = rng.next_below(2);
            bool b0 = rng.next_below(2), b1 = rng.next_below(2);
            a.set_observable(s, 0, a0);
            a.set_observable(s, 1, a1);
            b.set_observable(s, 0, b0);
            b.set_observable(s, 1, b1);
            if ((a0 != b0) || (a1 != b1)) expected++;
        }
        CHECK(logical_error_count(a, b) == expected);
    }
    SUBCASE("shape mismatch throws") {
        ShotBatch wrong(0, batch.num_observables, batch.shots + 1);
        CHECK_THROWS_AS(logical_error_count(batch, wrong), std::invalid_argument);
    }
}

TEST_CASE("raw batch dump round-trips") {
    auto g = build_repetition({CodeFamily::Repetition, 5, 5, Basis::Z});
    InjectionOptions opts;
    opts.data_qubits = g.data_qubits;
    Circuit noisy = apply_noise_model(g.circuit, NoiseModel::CircuitLevel, 0.1, opts);
    ShotBatch batch = sample_batch(noisy, 999, 4);
    std::ostringstream out(std::ios::binary);
    write_raw_batch(batch, out);
    std::istringstream in(out.str(), std::ios::binary);
    ShotBatch back = read_raw_batch(in);
    CHECK(back.shots == batch.shots);
    CHECK(back.num_detectors == batch.num_detectors);
    CHECK(back.num_observables == batch.num_observables);
    CHECK(back.det_bits == batch.det_bits);
    CHECK(back.obs_bits == batch.obs_bits);
    // header + shot-major packed payload
    size_t expect_bytes = 24 + 999 * ((batch.num_detectors + 7) / 8 + (batch.num_observables + 7) / 8);
    CHECK(out.str().size() == expect_bytes);
}

TEST_CASE("invalid circuits are rejected before sampling") {
    Circuit c;
    c.num_qubits = 1;
    Instruction bad;
    bad.op = Opcode::X_ERROR;
    bad.has_arg = true;
    bad.arg = 2.0;
    bad.targets = {Target::qubit(0)};
    c.instructions.push_back(bad);
    CHECK_THROWS_AS(sample_batch(c, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_batch(parse_circuit("H 0"), 0, 0), std::invalid_argument);
}
