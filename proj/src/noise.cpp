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

#include "qecbench/noise.hpp"

#include <algorithm>
#include <stdexcept>

namespace qec {

const char* error_type_name(ErrorType t) {
    switch (t) {
        case ErrorType::Depolarizing: return "depolarizing";
        case ErrorType::Gate: return "gate";
        case ErrorType::Readout: return "readout";
        case ErrorType::Reset: return "reset";
    }
    return "?";
}

const char* noise_model_name(NoiseModel m) {
    switch (m) {
        case NoiseModel::CodeCapacity: return "code_capacity";
        case NoiseModel::Phenomenological: return "phenomenological";
        case NoiseModel::CircuitLevel: return "circuit_level";
    }
    return "?";
}

std::string NoiseSource::name() const {
    return is_model ? noise_model_name(model) : error_type_name(type);
}

bool NoiseSource::from_name(const std::string& name, NoiseSource* out) {
    for (ErrorType t : {ErrorType::Depolarizing, ErrorType::Gate, ErrorType::Readout, ErrorType::Reset})
        if (name == error_type_name(t)) {
            *out = NoiseSource::of(t);
            return true;
        }
    for (NoiseModel m :
         {NoiseModel::CodeCapacity, NoiseModel::Phenomenological, NoiseModel::CircuitLevel})
        if (name == noise_model_name(m)) {
            *out = NoiseSource::of(m);
            return true;
        }
    return false;
}

namespace {

struct ChannelSet {
    bool round_start = false;  // depolarizing
    bool gate = false;
    bool readout = false;
    bool reset = false;
};

ChannelSet channels_for(ErrorType t) {
    ChannelSet s;
    switch (t) {
        case ErrorType::Depolarizing: s.round_start = true; break;
        case ErrorType::Gate: s.gate = true; break;
        case ErrorType::Readout: s.readout = true; break;
        case ErrorType::Reset: s.reset = true; break;
    }
    return s;
}

ChannelSet channels_for(NoiseModel m) {
    ChannelSet s;
    switch (m) {
        case NoiseModel::CodeCapacity:
            s.round_start = s.gate = true;
            break;
        case NoiseModel::Phenomenological:
            s.readout = s.reset = true;
            break;
        case NoiseModel::CircuitLevel:
            s.round_start = s.gate = s.readout = s.reset = true;
            break;
    }
    return s;
}

std::vector<uint32_t> infer_data_qubits(const Circuit& c) {
    // The final plain-M instruction of a memory experiment measures the data
    // qubits; ancillas are measured once per cycle earlier in the stream.
    for (auto it = c.instructions.rbegin(); it != c.instructions.rend(); ++it) {
        if (it->op == Opcode::M) {
            std::vector<uint32_t> qs;
            for (const Target& t : it->targets) qs.push_back(t.value);
            std::sort(qs.begin(), qs.end());
            return qs;
        }
    }
    return {};
}

Circuit inject(const Circuit& c, const ChannelSet& ch, double p, const InjectionOptions& opts) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("noise probability outside [0,1]");
    if (c.has_noise()) throw std::invalid_argument("circuit already carries noise opcodes");

    std::vector<uint32_t> data = opts.data_qubits;
    if (ch.round_start && data.empty()) data = infer_data_qubits(c);

    Circuit out;
    out.num_qubits = c.num_qubits;
    out.coords = c.coords;
    auto qubits_of = [](const Instruction& inst) {
        std::vector<uint32_t> qs;
        for (const Target& t : inst.targets) qs.push_back(t.value);
        return qs;
    };
    for (const Instruction& inst : c.instructions) {
        bool is_meas = inst.op == Opcode::M || inst.op == Opcode::MR;
        bool is_reset = inst.op == Opcode::R || inst.op == Opcode::MR;
        if (ch.readout && is_meas) {
            out.append_arg(Opcode::X_ERROR, p, qubits_of(inst));
            if (opts.strict_xz) out.append_arg(Opcode::Z_ERROR, p, qubits_of(inst));
        }
        out.append(inst);
        if (ch.reset && is_reset) {
            out.append_arg(Opcode::X_ERROR, p, qubits_of(inst));
            if (opts.strict_xz) out.append_arg(Opcode::Z_ERROR, p, qubits_of(inst));
        }
        if (ch.gate && inst.op == Opcode::H) out.append_arg(Opcode::DEPOLARIZE1, p, qubits_of(inst));
        if (ch.gate && (inst.op == Opcode::CX || inst.op == Opcode::CZ))
            out.append_arg(Opcode::DEPOLARIZE2, p, qubits_of(inst));
        if (ch.round_start && inst.op == Opcode::TICK && !data.empty())
            out.append_arg(Opcode::DEPOLARIZE1, p, data);
    }
    return out;
}

}  // namespace

Circuit apply_error_type(const Circuit& c, ErrorType t, double p, const InjectionOptions& opts) {
    return inject(c, channels_for(t), p, opts);
}

Circuit apply_noise_model(const Circuit& c, NoiseModel m, double p, const InjectionOptions& opts) {
    return inject(c, channels_for(m), p, opts);
}

Circuit apply_noise(const Circuit& c, const NoiseSpec& spec, const InjectionOptions& opts) {
    return spec.source.is_model ? apply_noise_model(c, spec.source.model, spec.p, opts)
                                : apply_error_type(c, spec.source.type, spec.p, opts);
}

Pauli sample_depolarize1(double p, CounterRng& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability outside [0,1]");
    if (rng.next_double() >= p) return Pauli::I;
    static constexpr Pauli kChoices[3] = {Pauli::X, Pauli::Z, Pauli::Y};
    return kChoices[rng.next_below(3)];
}

std::pair<Pauli, Pauli> sample_depolarize2(double p, CounterRng& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability outside [0,1]");
    if (rng.next_double() >= p) return {Pauli::I, Pauli::I};
    uint64_t v = 1 + rng.next_below(15);
    return {static_cast<Pauli>(v & 3u), static_cast<Pauli>((v >> 2) & 3u)};
}

}  // namespace qec
