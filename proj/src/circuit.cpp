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

#include "qecbench/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>

namespace qec {

namespace {

struct OpcodeInfo {
    Opcode op;
    const char* name;
    bool is_noise;
    bool two_qubit;
    bool rec_targets;
};

constexpr OpcodeInfo kOps[] = {
    {Opcode::R, "R", false, false, false},
    {Opcode::M, "M", false, false, false},
    {Opcode::MR, "MR", false, false, false},
    {Opcode::H, "H", false, false, false},
    {Opcode::CX, "CX", false, true, false},
    {Opcode::CZ, "CZ", false, true, false},
    {Opcode::X_ERROR, "X_ERROR", true, false, false},
    {Opcode::Z_ERROR, "Z_ERROR", true, false, false},
    {Opcode::DEPOLARIZE1, "DEPOLARIZE1", true, false, false},
    {Opcode::DEPOLARIZE2, "DEPOLARIZE2", true, true, false},
    {Opcode::TICK, "TICK", false, false, false},
    {Opcode::DETECTOR, "DETECTOR", false, false, true},
    {Opcode::OBSERVABLE_INCLUDE, "OBSERVABLE_INCLUDE", false, false, true},
};

const OpcodeInfo& info(Opcode op) { return kOps[static_cast<size_t>(op)]; }

}  // namespace

const char* opcode_name(Opcode op) { return info(op).name; }
bool opcode_is_noise(Opcode op) { return info(op).is_noise; }
bool opcode_is_two_qubit(Opcode op) { return info(op).two_qubit; }
bool opcode_takes_rec_targets(Opcode op) { return info(op).rec_targets; }

size_t Circuit::count_measurements() const {
    size_t n = 0;
    for (const auto& inst : instructions)
        if (inst.op == Opcode::M || inst.op == Opcode::MR) n += inst.targets.size();
    return n;
}

size_t Circuit::num_detectors() const {
    size_t n = 0;
    for (const auto& inst : instructions)
        if (inst.op == Opcode::DETECTOR) n++;
    return n;
}

size_t Circuit::num_observables() const {
    size_t n = 0;
    for (const auto& inst : instructions)
        if (inst.op == Opcode::OBSERVABLE_INCLUDE)
            n = std::max(n, static_cast<size_t>(inst.arg) + 1);
    return n;
}

bool Circuit::has_noise() const {
    for (const auto& inst : instructions)
        if (opcode_is_noise(inst.op)) return true;
    return false;
}

Circuit Circuit::without_noise() const {
    Circuit out;
    out.num_qubits = num_qubits;
    out.coords = coords;
    for (const auto& inst : instructions)
        if (!opcode_is_noise(inst.op)) out.instructions.push_back(inst);
    return out;
}

std::string format_real(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; prec++) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

bool parse_double(const std::string& s, double* out) {
    if (s.empty()) return false;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    *out = v;
    return true;
}

bool parse_uint(const std::string& s, uint32_t* out) {
    if (s.empty()) return false;
    uint64_t v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        v = v * 10 + static_cast<uint64_t>(c - '0');
        if (v > 0xFFFFFFFFull) return false;
    }
    *out = static_cast<uint32_t>(v);
    return true;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    Circuit c;
    size_t measurements_so_far = 0;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        line_no++;
        if (pos > text.size() && line.empty()) break;

        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        // Split off the name and optional parenthesized argument(s).
        size_t name_end = line.find_first_of(" \t(");
        std::string name = line.substr(0, name_end);
        std::string arg_text;
        bool has_paren = false;
        std::string rest;
        if (name_end != std::string::npos && line[name_end] == '(') {
            size_t close = line.find(')', name_end);
            if (close == std::string::npos) throw ParseError(line_no, "unterminated '('");
            arg_text = line.substr(name_end + 1, close - name_end - 1);
            has_paren = true;
            rest = line.substr(close + 1);
        } else if (name_end != std::string::npos) {
            rest = line.substr(name_end);
        }
        std::vector<std::string> toks = split_ws(rest);

        if (name == "QUBIT_COORDS") {
            if (!has_paren) throw ParseError(line_no, "QUBIT_COORDS requires (x, y)");
            size_t comma = arg_text.find(',');
            if (comma == std::string::npos)
                throw ParseError(line_no, "QUBIT_COORDS requires two coordinates");
            auto strip = [](std::string s) {
                auto b = s.find_first_not_of(" \t");
                auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            double x, y;
            if (!parse_double(strip(arg_text.substr(0, comma)), &x) ||
                !parse_double(strip(arg_text.substr(comma + 1)), &y))
                throw ParseError(line_no, "malformed coordinate");
            if (toks.size() != 1) throw ParseError(line_no, "QUBIT_COORDS takes one qubit");
            uint32_t q;
            if (!parse_uint(toks[0], &q)) throw ParseError(line_no, "malformed qubit index");
            c.coords[q] = {x, y};
            c.num_qubits = std::max(c.num_qubits, q + 1);
            continue;
        }

        const OpcodeInfo* oi = nullptr;
        for (const auto& k : kOps)
            if (name == k.name) oi = &k;
        if (!oi) throw ParseError(line_no, "unknown opcode '" + name + "'");

        Instruction inst;
        inst.op = oi->op;
        if (has_paren) {
            if (!oi->is_noise && oi->op != Opcode::OBSERVABLE_INCLUDE)
                throw ParseError(line_no, std::string(oi->name) + " takes no argument");
            double a;
            if (!parse_double(arg_text, &a)) throw ParseError(line_no, "malformed probability");
            if (oi->is_noise && (a < 0.0 || a > 1.0))
                throw ParseError(line_no, "probability out of [0,1]");
            if (oi->op == Opcode::OBSERVABLE_INCLUDE &&
                (a < 0.0 || a != static_cast<double>(static_cast<uint32_t>(a))))
                throw ParseError(line_no, "observable index must be a non-negative integer");
            inst.has_arg = true;
            inst.arg = a;
        } else if (oi->is_noise || oi->op == Opcode::OBSERVABLE_INCLUDE) {
            throw ParseError(line_no, std::string(oi->name) + " requires an argument");
        }

        for (const std::string& t : toks) {
            if (t.rfind("rec[-", 0) == 0 && t.back() == ']') {
                uint32_t k;
                if (!parse_uint(t.substr(5, t.size() - 6), &k) || k == 0)
                    throw ParseError(line_no, "malformed record target '" + t + "'");
                if (!oi->rec_targets)
                    throw ParseError(line_no,
                                     std::string(oi->name) + " does not take record targets");
                if (k > measurements_so_far)
                    throw ParseError(line_no, "record target rec[-" + std::to_string(k) +
                                                  "] reaches before the first measurement");
                inst.targets.push_back(Target::rec(k));
            } else {
                uint32_t q;
                if (!parse_uint(t, &q)) throw ParseError(line_no, "malformed target '" + t + "'");
                if (oi->rec_targets)
                    throw ParseError(line_no,
                                     std::string(oi->name) + " takes only record targets");
                inst.targets.push_back(Target::qubit(q));
            }
        }
        if (inst.targets.empty() && oi->op != Opcode::TICK)
            throw ParseError(line_no, std::string(oi->name) + " requires targets");
        if (oi->two_qubit && inst.targets.size() % 2 != 0)
            throw ParseError(line_no, std::string(oi->name) + " requires an even target count");
        if (inst.op == Opcode::M || inst.op == Opcode::MR)
            measurements_so_far += inst.targets.size();
        c.append(std::move(inst));
    }
    return c;
}

std::string serialize_circuit(const Circuit& c) {
    std::string out;
    for (const auto& [q, xy] : c.coords) {
        out += "QUBIT_COORDS(" + format_real(xy.first) + ", " + format_real(xy.second) + ") " +
               std::to_string(q) + "\n";
    }
    for (const auto& inst : c.instructions) {
        out += opcode_name(inst.op);
        if (inst.has_arg) out += "(" + format_real(inst.arg) + ")";
        for (const Target& t : inst.targets) {
            out += ' ';
            if (t.is_rec)
                out += "rec[-" + std::to_string(t.value) + "]";
            else
                out += std::to_string(t.value);
        }
        out += '\n';
    }
    return out;
}

std::vector<Violation> validate(const Circuit& c) {
    std::vector<Violation> report;
    auto flag = [&](size_t idx, std::string msg) { report.push_back({idx, std::move(msg)}); };

    size_t measurements = 0;
    for (size_t i = 0; i < c.instructions.size(); i++) {
        const Instruction& inst = c.instructions[i];
        const char* name = opcode_name(inst.op);
        bool rec_op = opcode_takes_rec_targets(inst.op);
        bool noise = opcode_is_noise(inst.op);

        if (inst.op == Opcode::TICK && !inst.targets.empty())
            flag(i, "TICK takes no targets");

        if (noise) {
            if (!inst.has_arg)
                flag(i, std::string(name) + " is missing its probability");
            else if (inst.arg < 0.0 || inst.arg > 1.0)
                flag(i, std::string(name) + " probability " + format_real(inst.arg) +
                            " outside [0,1]");
        } else if (inst.op == Opcode::OBSERVABLE_INCLUDE) {
            if (!inst.has_arg)
                flag(i, "OBSERVABLE_INCLUDE is missing its observable index");
            else if (inst.arg < 0.0 || inst.arg != static_cast<double>(static_cast<uint32_t>(inst.arg)))
                flag(i, "OBSERVABLE_INCLUDE index must be a non-negative integer");
        } else if (inst.has_arg) {
            flag(i, std::string(name) + " carries an argument but takes none");
        }

        for (const Target& t : inst.targets) {
            if (t.is_rec) {
                if (!rec_op) {
                    flag(i, std::string(name) + " does not take record targets");
                } else if (t.value == 0 || t.value > measurements) {
                    flag(i, "record target rec[-" + std::to_string(t.value) + "] does not resolve (" +
                                std::to_string(measurements) + " prior measurements)");
                }
            } else {
                if (rec_op)
                    flag(i, std::string(name) + " takes only record targets");
                else if (t.value >= c.num_qubits)
                    flag(i, "qubit target " + std::to_string(t.value) + " out of range (num_qubits " +
                                std::to_string(c.num_qubits) + ")");
            }
        }

        if (opcode_is_two_qubit(inst.op)) {
            if (inst.targets.size() % 2 != 0)
                flag(i, std::string(name) + " requires a target count divisible by 2");
            else
                for (size_t k = 0; k + 1 < inst.targets.size(); k += 2)
                    if (inst.targets[k] == inst.targets[k + 1])
                        flag(i, std::string(name) + " pair targets the same qubit " +
                                    std::to_string(inst.targets[k].value));
        }

        if (inst.op == Opcode::M || inst.op == Opcode::MR)
            measurements += inst.targets.size();
    }
    return report;
}

PauliString conjugate_through(const Instruction& gate, const PauliString& frame) {
    PauliString f = frame;
    switch (gate.op) {
        case Opcode::H:
            for (const Target& t : gate.targets) {
                bool x = f.x_bit(t.value), z = f.z_bit(t.value);
                f.set(t.value, pauli_from_xz(z, x));
            }
            break;
        case Opcode::CX:
            for (size_t k = 0; k + 1 < gate.targets.size(); k += 2) {
                uint32_t ctrl = gate.targets[k].value, tgt = gate.targets[k + 1].value;
                if (f.x_bit(ctrl)) f.flip_x(tgt);
                if (f.z_bit(tgt)) f.flip_z(ctrl);
            }
            break;
        case Opcode::CZ:
            for (size_t k = 0; k + 1 < gate.targets.size(); k += 2) {
                uint32_t a = gate.targets[k].value, b = gate.targets[k + 1].value;
                if (f.x_bit(a)) f.flip_z(b);
                if (f.x_bit(b)) f.flip_z(a);
            }
            break;
        default:
            throw std::invalid_argument(std::string("unsupported gate for conjugation: ") +
                                        opcode_name(gate.op));
    }
    return f;
}

}  // namespace qec
