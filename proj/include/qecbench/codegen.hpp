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

#ifndef QECBENCH_CODEGEN_HPP
#define QECBENCH_CODEGEN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qecbench/circuit.hpp"

namespace qec {

enum class CodeFamily : uint8_t { Rotated, Unrotated, Repetition };
enum class Basis : uint8_t { Z, X };

const char* family_name(CodeFamily f);
bool family_from_name(const std::string& name, CodeFamily* out);

struct CodeSpec {
    CodeFamily family = CodeFamily::Rotated;
    int distance = 3;
    int rounds = 9;
    Basis basis = Basis::Z;
};

// Integer lattice coordinate; data qubits and stabilizer ancillas live on
// the doubled grid so that plaquette adjacency is a fixed offset pattern.
struct Coord {
    int x = 0, y = 0;
    bool operator==(const Coord& o) const { return x == o.x && y == o.y; }
    bool operator<(const Coord& o) const { return y != o.y ? y < o.y : x < o.x; }
};

struct LayoutMap {
    std::map<Coord, uint32_t> data_qubits;
    std::map<Coord, uint32_t> x_ancillas;
    std::map<Coord, uint32_t> z_ancillas;
    // Ancilla qubit id -> adjacent data qubit ids, in schedule-layer order
    // (missing boundary corners skipped).
    std::map<uint32_t, std::vector<uint32_t>> plaquettes;
    uint32_t num_qubits = 0;

    bool is_x_ancilla(uint32_t q) const {
        for (const auto& [c, idx] : x_ancillas)
            if (idx == q) return true;
        return false;
    }
};

struct DetectorInfo {
    uint32_t ancilla = 0;  // qubit id of the stabilizer this detector tracks
    int round = 0;         // 0-based cycle index; == rounds for the final data-parity layer
    bool is_x_class = false;
    Coord coord;
};

// A built memory experiment plus the metadata downstream stages need
// (detector classification for X/Z graph splitting, the data-qubit set for
// noise anchoring, diagnostics coordinates).
struct GeneratedCircuit {
    CodeSpec spec;
    Circuit circuit;
    LayoutMap layout;
    std::vector<DetectorInfo> detectors;
    std::vector<uint32_t> data_qubits;       // sorted
    std::vector<uint32_t> observable_data;   // data qubits of the logical operator
};

// Memory-experiment builders. Throw std::invalid_argument for even or < 3
// distance, rounds < 1, or an unsupported family/basis combination.
GeneratedCircuit build_rotated_surface(const CodeSpec& spec);
GeneratedCircuit build_unrotated_surface(const CodeSpec& spec);
GeneratedCircuit build_repetition(const CodeSpec& spec);
GeneratedCircuit build_memory_circuit(const CodeSpec& spec);  // dispatch on family

// One stabilizer-measurement cycle: ancilla reset, H on X-ancillas, the
// interleaved CX layers (one instruction per layer), H on X-ancillas,
// ancilla measurement. Detectors are added by the experiment builders.
std::vector<Instruction> stabilizer_schedule(const LayoutMap& layout);

// rounds = 3 * distance.
int default_rounds(int distance);

struct ResourceCount {
    uint64_t qubits = 0;
    uint64_t gates = 0;  // Hadamard targets + two-qubit gate pairs
};
ResourceCount resource_count(const CodeSpec& spec);

// Data-qubit count of a family at a given distance (layout formula).
uint64_t family_qubit_count(CodeFamily f, int distance);

}  // namespace qec

#endif
