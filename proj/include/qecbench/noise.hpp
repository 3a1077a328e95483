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

#ifndef QECBENCH_NOISE_HPP
#define QECBENCH_NOISE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qecbench/circuit.hpp"
#include "qecbench/pauli.hpp"
#include "qecbench/rng.hpp"

namespace qec {

// The four injectable error channels.
enum class ErrorType : uint8_t { Depolarizing, Gate, Readout, Reset };

// Composite models. CircuitLevel is structurally the union of the other two.
enum class NoiseModel : uint8_t { CodeCapacity, Phenomenological, CircuitLevel };

const char* error_type_name(ErrorType t);
const char* noise_model_name(NoiseModel m);

// A single noise source: one error type or one composite model.
struct NoiseSource {
    bool is_model = false;
    ErrorType type = ErrorType::Depolarizing;
    NoiseModel model = NoiseModel::CircuitLevel;

    static NoiseSource of(ErrorType t) { return NoiseSource{false, t, NoiseModel::CircuitLevel}; }
    static NoiseSource of(NoiseModel m) { return NoiseSource{true, ErrorType::Depolarizing, m}; }
    std::string name() const;
    static bool from_name(const std::string& name, NoiseSource* out);
};

struct NoiseSpec {
    NoiseSource source;
    double p = 0.0;
};

struct InjectionOptions {
    // Anchors for the round-start depolarizing channel. Empty means "infer":
    // the targets of the last plain-M instruction (the final data
    // measurement of a memory experiment).
    std::vector<uint32_t> data_qubits;
    // Also insert Z_ERROR(p) at readout/reset anchors. Off by default: a Z
    // flip right before a Z-basis measurement or right after reset to |0> is
    // unobservable, so the nominal rate would be silently diluted.
    bool strict_xz = false;
};

// Insert one error type into a clean circuit:
//   Depolarizing  DEPOLARIZE1(p) on all data qubits after each round TICK
//   Gate          DEPOLARIZE1(p) after H, DEPOLARIZE2(p) after CX/CZ
//   Readout       X_ERROR(p) immediately before every M/MR
//   Reset         X_ERROR(p) immediately after every R (and MR's reset)
// Gate sequence and annotations are untouched; deleting all noise opcodes
// recovers the input exactly. Throws if p is out of [0,1] or the circuit
// already carries noise opcodes.
Circuit apply_error_type(const Circuit& c, ErrorType t, double p, const InjectionOptions& opts = {});

// CodeCapacity = Depolarizing + Gate; Phenomenological = Readout + Reset;
// CircuitLevel = all four.
Circuit apply_noise_model(const Circuit& c, NoiseModel m, double p, const InjectionOptions& opts = {});

Circuit apply_noise(const Circuit& c, const NoiseSpec& spec, const InjectionOptions& opts = {});

// Single-qubit depolarizing draw: I with probability 1-p, else uniformly one
// of {X, Y, Z}.
Pauli sample_depolarize1(double p, CounterRng& rng);

// Two-qubit depolarizing draw: (I,I) with probability 1-p, else uniformly
// one of the 15 non-identity pairs.
std::pair<Pauli, Pauli> sample_depolarize2(double p, CounterRng& rng);

}  // namespace qec

#endif
