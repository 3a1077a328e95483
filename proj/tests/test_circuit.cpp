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

#include <doctest.h>

#include "qecbench/codegen.hpp"
#include "qecbench/noise.hpp"

using namespace qec;

TEST_CASE("parse a small program") {
    Circuit c = parse_circuit("H 0\nCX 0 1\nM 1\n");
    CHECK(c.instructions.size() == 3);
    CHECK(c.num_qubits == 2);
    CHECK(c.instructions[0].op == Opcode::H);
    CHECK(c.instructions[1].targets.size() == 2);
}

TEST_CASE("empty text gives an empty circuit") {
    Circuit c = parse_circuit("");
    CHECK(c.instructions.empty());
    CHECK(c.num_qubits == 0);
}

TEST_CASE("unknown opcode names its line") {
    try {
        parse_circuit("H 0\nFOO 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    try {
        parse_circuit("FOO 1");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
}

TEST_CASE("malformed probability and bad backrefs are parse errors") {
    CHECK_THROWS_AS(parse_circuit("X_ERROR(nope) 0"), ParseError);
    CHECK_THROWS_AS(parse_circuit("X_ERROR(1.5) 0"), ParseError);
    CHECK_THROWS_AS(parse_circuit("M 0\nDETECTOR rec[-2]"), ParseError);
    CHECK_THROWS_AS(parse_circuit("DETECTOR rec[0]"), ParseError);
}

TEST_CASE("comments, blank lines and coordinates") {
    Circuit c = parse_circuit(
        "# memory experiment\n"
        "QUBIT_COORDS(1, 2) 0\n"
        "\n"
        "H 0  # inline comment\n"
        "M 0\n"
        "DETECTOR rec[-1]\n"
        "OBSERVABLE_INCLUDE(0) rec[-1]\n");
    CHECK(c.coords.at(0) == std::make_pair(1.0, 2.0));
    CHECK(c.num_detectors() == 1);
    CHECK(c.num_observables() == 1);
}

TEST_CASE("serialize then parse is the identity on generated circuits") {
    for (CodeFamily fam : {CodeFamily::Rotated, CodeFamily::Unrotated, CodeFamily::Repetition}) {
        for (int d : {3, 5}) {
            CodeSpec spec{fam, d, default_rounds(d), Basis::Z};
            Circuit base = build_memory_circuit(spec).circuit;
            Circuit noisy = apply_noise(base, {NoiseSource::of(NoiseModel::CircuitLevel), 1e-3});
            for (const Circuit* c : {&base, &noisy}) {
                Circuit reparsed = parse_circuit(serialize_circuit(*c));
                CHECK(reparsed == *c);
                // serialized form is canonical
                CHECK(serialize_circuit(reparsed) == serialize_circuit(*c));
            }
        }
    }
}

TEST_CASE("format_real round-trips and stays short") {
    CHECK(format_real(0.001) == "0.001");
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(1.0) == "1");
    double awkward = 1.0 / 3.0;
    CHECK(std::strtod(format_real(awkward).c_str(), nullptr) == awkward);
}

TEST_CASE("validate flags the spec'd violations") {
    SUBCASE("well-formed generated circuit is clean") {
        CodeSpec spec{CodeFamily::Rotated, 3, 9, Basis::Z};
        auto g = build_memory_circuit(spec);
        CHECK(validate(g.circuit).empty());
        Circuit noisy = apply_noise(g.circuit, {NoiseSource::of(NoiseModel::CircuitLevel), 0.01});
        CHECK(validate(noisy).empty());
    }
    SUBCASE("unresolvable detector reference") {
        Circuit c;
        c.append(Opcode::M, {0, 1});
        Instruction det;
        det.op = Opcode::DETECTOR;
        det.targets.push_back(Target::rec(5));
        c.append(det);
        auto report = validate(c);
        REQUIRE(report.size() == 1);
        CHECK(report[0].instruction_index == 1);
    }
    SUBCASE("noise probability out of range") {
        Circuit c;
        Instruction err;
        err.op = Opcode::X_ERROR;
        err.has_arg = true;
        err.arg = 1.5;
        err.targets.push_back(Target::qubit(0));
        c.append(err);
        CHECK(validate(c).size() == 1);
    }
    SUBCASE("qubit out of range and self-paired CX") {
        Circuit c;
        c.num_qubits = 2;
        Instruction cx;
        cx.op = Opcode::CX;
        cx.targets = {Target::qubit(0), Target::qubit(0)};
        c.instructions.push_back(cx);
        Instruction h;
        h.op = Opcode::H;
        h.targets = {Target::qubit(7)};
        c.instructions.push_back(h);
        CHECK(validate(c).size() == 2);
    }
}

TEST_CASE("conjugation rules") {
    auto h_gate = [](uint32_t q) {
        Instruction h;
        h.op = Opcode::H;
        h.targets = {Target::qubit(q)};
        return h;
    };
    auto two_qubit = [](Opcode op, uint32_t a, uint32_t b) {
        Instruction g;
        g.op = op;
        g.targets = {Target::qubit(a), Target::qubit(b)};
        return g;
    };

    SUBCASE("H swaps X and Z") {
        auto fx = PauliString::single(2, 0, Pauli::X);
        CHECK(conjugate_through(h_gate(0), fx) == PauliString::single(2, 0, Pauli::Z));
        CHECK(conjugate_through(h_gate(0), conjugate_through(h_gate(0), fx)) == fx);
    }
    SUBCASE("CX copies X to the target and Z to the control") {
        auto fx = PauliString::single(2, 0, Pauli::X);
        auto out = conjugate_through(two_qubit(Opcode::CX, 0, 1), fx);
        CHECK(out.get(0) == Pauli::X);
        CHECK(out.get(1) == Pauli::X);
        auto fz = PauliString::single(2, 1, Pauli::Z);
        out = conjugate_through(two_qubit(Opcode::CX, 0, 1), fz);
        CHECK(out.get(0) == Pauli::Z);
        CHECK(out.get(1) == Pauli::Z);
    }
    SUBCASE("CZ maps X to X tensor Z") {
        auto fx = PauliString::single(2, 0, Pauli::X);
        auto out = conjugate_through(two_qubit(Opcode::CZ, 0, 1), fx);
        CHECK(out.get(0) == Pauli::X);
        CHECK(out.get(1) == Pauli::Z);
    }
    SUBCASE("involution for H, CX, CZ applied twice") {
        CounterRng rng(11, 0);
        for (int rep = 0; rep < 30; rep++) {
            PauliString f(4);
            for (size_t q = 0; q < 4; q++) f.set(q, static_cast<Pauli>(rng.next_below(4)));
            for (Opcode op : {Opcode::CX, Opcode::CZ}) {
                auto g = two_qubit(op, 1, 3);
                CHECK(conjugate_through(g, conjugate_through(g, f)) == f);
            }
            CHECK(conjugate_through(h_gate(2), conjugate_through(h_gate(2), f)) == f);
        }
    }
    SUBCASE("non-Clifford opcode is rejected") {
        Instruction m;
        m.op = Opcode::M;
        m.targets = {Target::qubit(0)};
        CHECK_THROWS_AS(conjugate_through(m, PauliString(1)), std::invalid_argument);
    }
}
