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

#ifndef QECBENCH_CIRCUIT_HPP
#define QECBENCH_CIRCUIT_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qecbench/pauli.hpp"

namespace qec {

enum class Opcode : uint8_t {
    R,
    M,
    MR,
    H,
    CX,
    CZ,
    X_ERROR,
    Z_ERROR,
    DEPOLARIZE1,
    DEPOLARIZE2,
    TICK,
    DETECTOR,
    OBSERVABLE_INCLUDE,
};

const char* opcode_name(Opcode op);
bool opcode_is_noise(Opcode op);
bool opcode_is_two_qubit(Opcode op);   // CX, CZ, DEPOLARIZE2
bool opcode_takes_rec_targets(Opcode op);  // DETECTOR, OBSERVABLE_INCLUDE

// A gate/noise target (qubit index) or a measurement-record back-reference
// rec[-k] with lookback k >= 1.
struct Target {
    uint32_t value = 0;
    bool is_rec = false;

    static Target qubit(uint32_t q) { return Target{q, false}; }
    static Target rec(uint32_t lookback) { return Target{lookback, true}; }

    bool operator==(const Target& o) const { return value == o.value && is_rec == o.is_rec; }
    bool operator!=(const Target& o) const { return !(*this == o); }
};

struct Instruction {
    Opcode op = Opcode::TICK;
    bool has_arg = false;
    double arg = 0.0;  // probability for noise ops, observable index for OBSERVABLE_INCLUDE
    std::vector<Target> targets;

    bool operator==(const Instruction& o) const {
        return op == o.op && has_arg == o.has_arg && arg == o.arg && targets == o.targets;
    }
    bool operator!=(const Instruction& o) const { return !(*this == o); }
};

// Ordered instruction list plus optional lattice coordinates per qubit.
// Immutable by convention once built; all operations on circuits are pure.
struct Circuit {
    uint32_t num_qubits = 0;
    std::vector<Instruction> instructions;
    std::map<uint32_t, std::pair<double, double>> coords;

    Circuit& append(Opcode op, std::initializer_list<uint32_t> qubits) {
        Instruction inst;
        inst.op = op;
        for (uint32_t q : qubits) inst.targets.push_back(Target::qubit(q));
        return append(std::move(inst));
    }
    Circuit& append(Opcode op, const std::vector<uint32_t>& qubits) {
        Instruction inst;
        inst.op = op;
        for (uint32_t q : qubits) inst.targets.push_back(Target::qubit(q));
        return append(std::move(inst));
    }
    Circuit& append_arg(Opcode op, double arg, const std::vector<uint32_t>& qubits) {
        Instruction inst;
        inst.op = op;
        inst.has_arg = true;
        inst.arg = arg;
        for (uint32_t q : qubits) inst.targets.push_back(Target::qubit(q));
        return append(std::move(inst));
    }
    Circuit& append(Instruction inst) {
        for (const Target& t : inst.targets)
            if (!t.is_rec && t.value >= num_qubits) num_qubits = t.value + 1;
        instructions.push_back(std::move(inst));
        return *this;
    }

    size_t count_measurements() const;
    size_t num_detectors() const;
    size_t num_observables() const;  // max observable index + 1
    bool has_noise() const;

    // Copy with every noise instruction removed.
    Circuit without_noise() const;

    bool operator==(const Circuit& o) const {
        return num_qubits == o.num_qubits && instructions == o.instructions && coords == o.coords;
    }
    bool operator!=(const Circuit& o) const { return !(*this == o); }
};

// Parse failure; carries the 1-based source line.
class ParseError : public std::runtime_error {
  public:
    ParseError(size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    size_t line() const { return line_; }

  private:
    size_t line_;
};

// Line-oriented text format:
//   OPCODE[(arg)] target+      targets are decimal qubit indices or rec[-k]
//   QUBIT_COORDS(x, y) q       coordinate metadata
//   # comment
Circuit parse_circuit(const std::string& text);
std::string serialize_circuit(const Circuit& c);

// Shortest decimal representation that round-trips through strtod.
std::string format_real(double v);

struct Violation {
    size_t instruction_index;
    std::string message;
};

// Checks every structural invariant (target ranges, record back-references,
// pairing of two-qubit ops, probability ranges, argument presence). Returns
// one entry per violation; an empty report means the circuit is well formed.
std::vector<Violation> validate(const Circuit& c);

// Conjugates `frame` through a Clifford gate instruction (H, CX or CZ,
// applied to each target / target pair in order). Throws on other opcodes.
PauliString conjugate_through(const Instruction& gate, const PauliString& frame);

}  // namespace qec

#endif
