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

#include "qecbench/codegen.hpp"

#include <doctest.h>

#include <set>

#include "qecbench/noise.hpp"
#include "qecbench/sim.hpp"

using namespace qec;

namespace {

Circuit with_forced_error(const Circuit& c, size_t position, Opcode err, uint32_t qubit) {
    Circuit out;
    out.num_qubits = c.num_qubits;
    out.coords = c.coords;
    for (size_t i = 0; i <= c.instructions.size(); i++) {
        if (i == position) {
            Instruction e;
            e.op = err;
            e.has_arg = true;
            e.arg = 1.0;
            e.targets = {Target::qubit(qubit)};
            out.instructions.push_back(e);
        }
        if (i < c.instructions.size()) out.instructions.push_back(c.instructions[i]);
    }
    return out;
}

}  // namespace

TEST_CASE("qubit count formulas") {
    for (int d : {3, 5, 7, 9}) {
        CHECK(build_rotated_surface({CodeFamily::Rotated, d, 1, Basis::Z}).circuit.num_qubits ==
              static_cast<uint32_t>(2 * d * d - 1));
        CHECK(build_unrotated_surface({CodeFamily::Unrotated, d, 1, Basis::Z}).circuit.num_qubits ==
              static_cast<uint32_t>((2 * d - 1) * (2 * d - 1)));
    }
    CHECK(build_rotated_surface({CodeFamily::Rotated, 3, 9, Basis::Z}).circuit.num_qubits == 17);
    CHECK(build_unrotated_surface({CodeFamily::Unrotated, 3, 9, Basis::Z}).circuit.num_qubits == 25);
    CHECK(build_unrotated_surface({CodeFamily::Unrotated, 5, 15, Basis::Z}).circuit.num_qubits == 81);
    CHECK(build_repetition({CodeFamily::Repetition, 3, 9, Basis::Z}).circuit.num_qubits == 5);
}

TEST_CASE("ancilla composition") {
    auto rot = build_rotated_surface({CodeFamily::Rotated, 3, 1, Basis::Z});
    CHECK(rot.layout.data_qubits.size() == 9);
    CHECK(rot.layout.x_ancillas.size() == 4);
    CHECK(rot.layout.z_ancillas.size() == 4);

    auto unrot = build_unrotated_surface({CodeFamily::Unrotated, 3, 1, Basis::Z});
    CHECK(unrot.layout.data_qubits.size() == 13);  // d^2 + (d-1)^2
    CHECK(unrot.layout.x_ancillas.size() == 6);
    CHECK(unrot.layout.z_ancillas.size() == 6);

    for (int d : {3, 5}) {
        auto g = build_unrotated_surface({CodeFamily::Unrotated, d, 1, Basis::Z});
        CHECK(g.layout.data_qubits.size() == static_cast<size_t>(d * d + (d - 1) * (d - 1)));
        CHECK(g.layout.x_ancillas.size() + g.layout.z_ancillas.size() ==
              static_cast<size_t>(2 * d * (d - 1)));
    }
}

TEST_CASE("every data qubit sits in at least one X and one Z plaquette") {
    for (CodeFamily fam : {CodeFamily::Rotated, CodeFamily::Unrotated}) {
        for (int d : {3, 5}) {
            auto g = build_memory_circuit({fam, d, 1, Basis::Z});
            std::set<uint32_t> x_cover, z_cover;
            for (const auto& [c, anc] : g.layout.x_ancillas)
                for (uint32_t q : g.layout.plaquettes.at(anc)) x_cover.insert(q);
            for (const auto& [c, anc] : g.layout.z_ancillas)
                for (uint32_t q : g.layout.plaquettes.at(anc)) z_cover.insert(q);
            for (const auto& [c, q] : g.layout.data_qubits) {
                CHECK(x_cover.count(q));
                CHECK(z_cover.count(q));
            }
        }
    }
}

TEST_CASE("spec validation rejects bad shapes") {
    CHECK_THROWS_AS(build_rotated_surface({CodeFamily::Rotated, 4, 9, Basis::Z}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_rotated_surface({CodeFamily::Rotated, 1, 3, Basis::Z}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_rotated_surface({CodeFamily::Rotated, 3, 0, Basis::Z}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_repetition({CodeFamily::Repetition, 3, 9, Basis::X}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_rotated_surface({CodeFamily::Unrotated, 3, 9, Basis::Z}),
                    std::invalid_argument);
}

TEST_CASE("default rounds rule") {
    CHECK(default_rounds(3) == 9);
    CHECK(default_rounds(5) == 15);
    CHECK(default_rounds(25) == 75);
}

TEST_CASE("resource counts") {
    CHECK(resource_count({CodeFamily::Unrotated, 7, 21, Basis::Z}).qubits == 169);
    CHECK(resource_count({CodeFamily::Rotated, 3, 9, Basis::Z}).qubits == 17);

    // Gate count agrees with a direct walk over the built instructions.
    CodeSpec spec{CodeFamily::Rotated, 3, 9, Basis::Z};
    auto g = build_memory_circuit(spec);
    uint64_t hand = 0;
    for (const auto& inst : g.circuit.instructions) {
        if (inst.op == Opcode::H) hand += inst.targets.size();
        if (inst.op == Opcode::CX || inst.op == Opcode::CZ) hand += inst.targets.size() / 2;
    }
    CHECK(resource_count(spec).gates == hand);
    // Per round: 8 Hadamards on the 4 X-ancillas plus 24 CX pairs.
    CHECK(hand == 9 * (8 + 24));
}

TEST_CASE("schedule structure") {
    auto g = build_rotated_surface({CodeFamily::Rotated, 3, 1, Basis::Z});
    auto block = stabilizer_schedule(g.layout);

    // R, H, 4 CX layers, H, M
    REQUIRE(block.size() == 8);
    CHECK(block.front().op == Opcode::R);
    CHECK(block[1].op == Opcode::H);
    for (int k = 2; k < 6; k++) CHECK(block[k].op == Opcode::CX);
    CHECK(block[6].op == Opcode::H);
    CHECK(block.back().op == Opcode::M);
    CHECK(block.back().targets.size() == 8);  // one measurement per ancilla

    SUBCASE("no qubit is touched twice within a CX layer") {
        for (int k = 2; k < 6; k++) {
            std::set<uint32_t> seen;
            for (const Target& t : block[k].targets) CHECK(seen.insert(t.value).second);
        }
    }
    SUBCASE("Z-plaquettes use data->ancilla CX; X-plaquettes ancilla->data") {
        std::set<uint32_t> x_ancs, z_ancs;
        for (const auto& [c, q] : g.layout.x_ancillas) x_ancs.insert(q);
        for (const auto& [c, q] : g.layout.z_ancillas) z_ancs.insert(q);
        size_t z_pairs = 0;
        for (int k = 2; k < 6; k++) {
            for (size_t i = 0; i + 1 < block[k].targets.size(); i += 2) {
                uint32_t ctrl = block[k].targets[i].value, tgt = block[k].targets[i + 1].value;
                if (z_ancs.count(tgt)) {
                    z_pairs++;
                    CHECK(!x_ancs.count(ctrl));
                } else {
                    CHECK(x_ancs.count(ctrl));
                }
            }
        }
        // Interior Z-plaquettes contribute 4 CX pairs each with the ancilla
        // as target; d=3 has two interior plus two weight-2 boundary Z-checks.
        CHECK(z_pairs == 2 * 4 + 2 * 2);
    }
    SUBCASE("schedule block matches the per-round block of the built circuit") {
        auto g9 = build_rotated_surface({CodeFamily::Rotated, 3, 9, Basis::Z});
        size_t first_tick = 0;
        while (g9.circuit.instructions[first_tick].op != Opcode::TICK) first_tick++;
        for (size_t k = 0; k < block.size(); k++)
            CHECK(g9.circuit.instructions[first_tick + 1 + k] == block[k]);
    }
}

TEST_CASE("zero-noise determinism over the family grid") {
    for (CodeFamily fam : {CodeFamily::Rotated, CodeFamily::Unrotated, CodeFamily::Repetition}) {
        for (int d : {3, 5}) {
            CodeSpec spec{fam, d, default_rounds(d), Basis::Z};
            auto g = build_memory_circuit(spec);
            InjectionOptions opts;
            opts.data_qubits = g.data_qubits;
            Circuit noisy =
                apply_noise(g.circuit, {NoiseSource::of(NoiseModel::CircuitLevel), 0.0}, opts);
            ShotBatch batch = sample_batch(noisy, 2000, 0xD15EA5Eull);
            for (uint32_t det = 0; det < batch.num_detectors; det++)
                REQUIRE(batch.count_detector(det) == 0);
            REQUIRE(batch.count_observable(0) == 0);
        }
    }
    SUBCASE("basis X is deterministic too") {
        for (CodeFamily fam : {CodeFamily::Rotated, CodeFamily::Unrotated}) {
            auto g = build_memory_circuit({fam, 3, 9, Basis::X});
            ShotBatch batch = sample_batch(g.circuit, 500, 7);
            for (uint32_t det = 0; det < batch.num_detectors; det++)
                REQUIRE(batch.count_detector(det) == 0);
            REQUIRE(batch.count_observable(0) == 0);
        }
    }
}

TEST_CASE("repetition code is blind to Z errors") {
    auto g = build_repetition({CodeFamily::Repetition, 3, 9, Basis::Z});
    // Z on a data qubit right after preparation, with certainty.
    Circuit z_err = with_forced_error(g.circuit, 1, Opcode::Z_ERROR, g.data_qubits[1]);
    ShotBatch batch = sample_batch(z_err, 200, 3);
    for (uint32_t det = 0; det < batch.num_detectors; det++) CHECK(batch.count_detector(det) == 0);
    CHECK(batch.count_observable(0) == 0);
}

TEST_CASE("X on the observable qubit just before readout flips the observable") {
    auto g = build_repetition({CodeFamily::Repetition, 3, 9, Basis::Z});
    size_t final_m = g.circuit.instructions.size();
    while (g.circuit.instructions[--final_m].op != Opcode::M) {
    }
    Circuit x_err = with_forced_error(g.circuit, final_m, Opcode::X_ERROR, g.observable_data[0]);
    ShotBatch batch = sample_batch(x_err, 100, 5);
    CHECK(batch.count_observable(0) == 100);
}

TEST_CASE("d=3: every single data X error is detected or harmless") {
    for (CodeFamily fam : {CodeFamily::Rotated, CodeFamily::Unrotated, CodeFamily::Repetition}) {
        CodeSpec spec{fam, 3, 9, Basis::Z};
        auto g = build_memory_circuit(spec);
        size_t positions = g.circuit.instructions.size() + 1;
        for (uint32_t q : g.data_qubits) {
            for (size_t pos = 0; pos < positions; pos++) {
                Circuit broken = with_forced_error(g.circuit, pos, Opcode::X_ERROR, q);
                ShotBatch batch = sample_batch(broken, 1, 1);
                bool detected = batch.count_any_detector() > 0;
                bool obs_flipped = batch.observable(0, 0);
                if (!detected) CHECK(!obs_flipped);
            }
        }
    }
}

TEST_CASE("d=3 surface codes: single data Z errors detected or harmless") {
    for (CodeFamily fam : {CodeFamily::Rotated, CodeFamily::Unrotated}) {
        CodeSpec spec{fam, 3, 9, Basis::Z};
        auto g = build_memory_circuit(spec);
        size_t positions = g.circuit.instructions.size() + 1;
        for (uint32_t q : g.data_qubits) {
            for (size_t pos = 0; pos < positions; pos++) {
                Circuit broken = with_forced_error(g.circuit, pos, Opcode::Z_ERROR, q);
                ShotBatch batch = sample_batch(broken, 1, 1);
                bool detected = batch.count_any_detector() > 0;
                bool obs_flipped = batch.observable(0, 0);
                if (!detected) CHECK(!obs_flipped);
            }
        }
    }
}

TEST_CASE("family name round trip") {
    for (CodeFamily f : {CodeFamily::Rotated, CodeFamily::Unrotated, CodeFamily::Repetition}) {
        CodeFamily back;
        REQUIRE(family_from_name(family_name(f), &back));
        CHECK(back == f);
    }
    CodeFamily dummy;
    CHECK(!family_from_name("toric", &dummy));
}
