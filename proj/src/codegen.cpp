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

#include <algorithm>
#include <stdexcept>

namespace qec {

const char* family_name(CodeFamily f) {
    switch (f) {
        case CodeFamily::Rotated: return "rotated";
        case CodeFamily::Unrotated: return "unrotated";
        case CodeFamily::Repetition: return "repetition";
    }
    return "?";
}

bool family_from_name(const std::string& name, CodeFamily* out) {
    if (name == "rotated") { *out = CodeFamily::Rotated; return true; }
    if (name == "unrotated") { *out = CodeFamily::Unrotated; return true; }
    if (name == "repetition") { *out = CodeFamily::Repetition; return true; }
    return false;
}

int default_rounds(int distance) { return 3 * distance; }

uint64_t family_qubit_count(CodeFamily f, int distance) {
    uint64_t d = static_cast<uint64_t>(distance);
    switch (f) {
        case CodeFamily::Rotated: return 2 * d * d - 1;
        case CodeFamily::Unrotated: return (2 * d - 1) * (2 * d - 1);
        case CodeFamily::Repetition: return 2 * d - 1;
    }
    return 0;
}

namespace {

void check_spec(const CodeSpec& spec) {
    if (spec.distance < 3 || spec.distance % 2 == 0)
        throw std::invalid_argument("distance must be odd and >= 3");
    if (spec.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (spec.family == CodeFamily::Repetition && spec.basis != Basis::Z)
        throw std::invalid_argument("repetition code supports only Z-basis memory");
}

// Offset sequences from ancilla center to the data qubit touched in each CX
// layer. The two sequences agree or are antipodal layer by layer, so no data
// qubit is touched twice inside a layer, and the middle-window hook pairs
// come out perpendicular to (or parallel along) the matching logical, which
// keeps the full code distance.
constexpr Coord kRotatedXOrder[4] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
constexpr Coord kRotatedZOrder[4] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
constexpr Coord kUnrotZOrder[4] = {{0, 1}, {1, 0}, {-1, 0}, {0, -1}};
constexpr Coord kUnrotXOrder[4] = {{0, 1}, {-1, 0}, {1, 0}, {0, -1}};
constexpr Coord kRepOrder[2] = {{-1, 0}, {1, 0}};

struct LayoutPlan {
    LayoutMap layout;
    // layer -> list of CX (control, target) pairs, already merged across
    // ancilla types.
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> cx_layers;
    std::vector<uint32_t> data_sorted;
    std::vector<uint32_t> anc_sorted;
    std::vector<uint32_t> observable_data;  // logical operator support
};

uint32_t require(const std::map<Coord, uint32_t>& m, Coord c) {
    auto it = m.find(c);
    if (it == m.end()) throw std::logic_error("layout lookup failed");
    return it->second;
}

LayoutPlan plan_rotated(const CodeSpec& spec) {
    const int d = spec.distance;
    LayoutPlan plan;
    LayoutMap& lay = plan.layout;

    std::vector<Coord> cells;  // ancilla centers
    auto cell_is_z = [](Coord c) { return ((c.x / 2 + c.y / 2) % 2) == 0; };
    for (int a = 0; a <= d; a++) {
        for (int b = 0; b <= d; b++) {
            Coord c{2 * a, 2 * b};
            bool interior = a >= 1 && a <= d - 1 && b >= 1 && b <= d - 1;
            bool top_bottom = (b == 0 || b == d) && a >= 1 && a <= d - 1 && !cell_is_z(c);
            bool left_right = (a == 0 || a == d) && b >= 1 && b <= d - 1 && cell_is_z(c);
            if (interior || top_bottom || left_right) cells.push_back(c);
        }
    }

    std::vector<Coord> all;
    for (int c = 0; c < d; c++)
        for (int r = 0; r < d; r++) all.push_back(Coord{2 * c + 1, 2 * r + 1});
    all.insert(all.end(), cells.begin(), cells.end());
    std::sort(all.begin(), all.end());
    std::map<Coord, uint32_t> index;
    for (size_t i = 0; i < all.size(); i++) index[all[i]] = static_cast<uint32_t>(i);
    lay.num_qubits = static_cast<uint32_t>(all.size());

    for (int c = 0; c < d; c++)
        for (int r = 0; r < d; r++) {
            Coord q{2 * c + 1, 2 * r + 1};
            lay.data_qubits[q] = index[q];
        }
    for (Coord c : cells) {
        if (cell_is_z(c))
            lay.z_ancillas[c] = index[c];
        else
            lay.x_ancillas[c] = index[c];
    }

    plan.cx_layers.assign(4, {});
    auto data_at = [&](Coord c) -> int64_t {
        auto it = lay.data_qubits.find(c);
        return it == lay.data_qubits.end() ? -1 : static_cast<int64_t>(it->second);
    };
    for (Coord c : cells) {
        uint32_t anc = index[c];
        bool is_z = cell_is_z(c);
        auto& members = lay.plaquettes[anc];
        for (int layer = 0; layer < 4; layer++) {
            Coord off = is_z ? kRotatedZOrder[layer] : kRotatedXOrder[layer];
            int64_t q = data_at(Coord{c.x + off.x, c.y + off.y});
            if (q < 0) continue;
            members.push_back(static_cast<uint32_t>(q));
            if (is_z)
                plan.cx_layers[layer].push_back({static_cast<uint32_t>(q), anc});  // data -> anc
            else
                plan.cx_layers[layer].push_back({anc, static_cast<uint32_t>(q)});  // anc -> data
        }
    }
    for (auto& layer : plan.cx_layers)
        std::sort(layer.begin(), layer.end());

    for (const auto& [c, q] : lay.data_qubits) plan.data_sorted.push_back(q);
    std::sort(plan.data_sorted.begin(), plan.data_sorted.end());
    for (const auto& [c, q] : lay.x_ancillas) plan.anc_sorted.push_back(q);
    for (const auto& [c, q] : lay.z_ancillas) plan.anc_sorted.push_back(q);
    std::sort(plan.anc_sorted.begin(), plan.anc_sorted.end());

    // Logical Z: the y=1 data row (west-east); logical X: the x=1 column.
    for (int c = 0; c < d; c++) {
        if (spec.basis == Basis::Z)
            plan.observable_data.push_back(require(lay.data_qubits, Coord{2 * c + 1, 1}));
        else
            plan.observable_data.push_back(require(lay.data_qubits, Coord{1, 2 * c + 1}));
    }
    std::sort(plan.observable_data.begin(), plan.observable_data.end());
    return plan;
}

LayoutPlan plan_unrotated(const CodeSpec& spec) {
    const int d = spec.distance;
    const int side = 2 * d - 1;
    LayoutPlan plan;
    LayoutMap& lay = plan.layout;

    std::vector<Coord> all;
    for (int y = 0; y < side; y++)
        for (int x = 0; x < side; x++) all.push_back(Coord{x, y});
    std::sort(all.begin(), all.end());
    std::map<Coord, uint32_t> index;
    for (size_t i = 0; i < all.size(); i++) index[all[i]] = static_cast<uint32_t>(i);
    lay.num_qubits = static_cast<uint32_t>(all.size());

    for (Coord c : all) {
        bool even_sum = ((c.x + c.y) % 2) == 0;
        if (even_sum)
            lay.data_qubits[c] = index[c];
        else if (c.x % 2 == 1)
            lay.x_ancillas[c] = index[c];  // odd x, even y
        else
            lay.z_ancillas[c] = index[c];  // even x, odd y
    }

    plan.cx_layers.assign(4, {});
    auto data_at = [&](Coord c) -> int64_t {
        auto it = lay.data_qubits.find(c);
        return it == lay.data_qubits.end() ? -1 : static_cast<int64_t>(it->second);
    };
    auto add_checks = [&](const std::map<Coord, uint32_t>& ancs, const Coord* order, bool is_z) {
        for (const auto& [c, anc] : ancs) {
            auto& members = lay.plaquettes[anc];
            for (int layer = 0; layer < 4; layer++) {
                Coord off = order[layer];
                int64_t q = data_at(Coord{c.x + off.x, c.y + off.y});
                if (q < 0) continue;
                members.push_back(static_cast<uint32_t>(q));
                if (is_z)
                    plan.cx_layers[layer].push_back({static_cast<uint32_t>(q), anc});
                else
                    plan.cx_layers[layer].push_back({anc, static_cast<uint32_t>(q)});
            }
        }
    };
    add_checks(lay.z_ancillas, kUnrotZOrder, true);
    add_checks(lay.x_ancillas, kUnrotXOrder, false);
    for (auto& layer : plan.cx_layers)
        std::sort(layer.begin(), layer.end());

    for (const auto& [c, q] : lay.data_qubits) plan.data_sorted.push_back(q);
    std::sort(plan.data_sorted.begin(), plan.data_sorted.end());
    for (const auto& [c, q] : lay.x_ancillas) plan.anc_sorted.push_back(q);
    for (const auto& [c, q] : lay.z_ancillas) plan.anc_sorted.push_back(q);
    std::sort(plan.anc_sorted.begin(), plan.anc_sorted.end());

    // Logical Z: the y=0 data row; logical X: the x=0 data column.
    for (int k = 0; k < d; k++) {
        if (spec.basis == Basis::Z)
            plan.observable_data.push_back(require(lay.data_qubits, Coord{2 * k, 0}));
        else
            plan.observable_data.push_back(require(lay.data_qubits, Coord{0, 2 * k}));
    }
    std::sort(plan.observable_data.begin(), plan.observable_data.end());
    return plan;
}

LayoutPlan plan_repetition(const CodeSpec& spec) {
    const int d = spec.distance;
    LayoutPlan plan;
    LayoutMap& lay = plan.layout;
    lay.num_qubits = static_cast<uint32_t>(2 * d - 1);
    for (int i = 0; i < d; i++) lay.data_qubits[Coord{2 * i, 0}] = static_cast<uint32_t>(2 * i);
    for (int i = 0; i < d - 1; i++)
        lay.z_ancillas[Coord{2 * i + 1, 0}] = static_cast<uint32_t>(2 * i + 1);

    plan.cx_layers.assign(2, {});
    for (const auto& [c, anc] : lay.z_ancillas) {
        auto& members = lay.plaquettes[anc];
        for (int layer = 0; layer < 2; layer++) {
            Coord off = kRepOrder[layer];
            uint32_t q = require(lay.data_qubits, Coord{c.x + off.x, c.y});
            members.push_back(q);
            plan.cx_layers[layer].push_back({q, anc});
        }
    }
    for (const auto& [c, q] : lay.data_qubits) plan.data_sorted.push_back(q);
    for (const auto& [c, q] : lay.z_ancillas) plan.anc_sorted.push_back(q);
    std::sort(plan.data_sorted.begin(), plan.data_sorted.end());
    std::sort(plan.anc_sorted.begin(), plan.anc_sorted.end());
    plan.observable_data.push_back(plan.data_sorted.front());
    return plan;
}

LayoutPlan make_plan(const CodeSpec& spec) {
    switch (spec.family) {
        case CodeFamily::Rotated: return plan_rotated(spec);
        case CodeFamily::Unrotated: return plan_unrotated(spec);
        case CodeFamily::Repetition: return plan_repetition(spec);
    }
    throw std::invalid_argument("unknown code family");
}

std::vector<Instruction> cycle_block(const LayoutPlan& plan) {
    std::vector<Instruction> block;
    auto push = [&](Opcode op, const std::vector<uint32_t>& qs) {
        Instruction inst;
        inst.op = op;
        for (uint32_t q : qs) inst.targets.push_back(Target::qubit(q));
        block.push_back(std::move(inst));
    };

    std::vector<uint32_t> x_ancs;
    for (const auto& [c, q] : plan.layout.x_ancillas) x_ancs.push_back(q);
    std::sort(x_ancs.begin(), x_ancs.end());

    push(Opcode::R, plan.anc_sorted);
    if (!x_ancs.empty()) push(Opcode::H, x_ancs);
    for (const auto& layer : plan.cx_layers) {
        Instruction inst;
        inst.op = Opcode::CX;
        for (const auto& [ctrl, tgt] : layer) {
            inst.targets.push_back(Target::qubit(ctrl));
            inst.targets.push_back(Target::qubit(tgt));
        }
        block.push_back(std::move(inst));
    }
    if (!x_ancs.empty()) push(Opcode::H, x_ancs);
    push(Opcode::M, plan.anc_sorted);
    return block;
}

GeneratedCircuit build_from_plan(const CodeSpec& spec, LayoutPlan plan) {
    GeneratedCircuit out;
    out.spec = spec;
    out.layout = plan.layout;
    out.data_qubits = plan.data_sorted;
    out.observable_data = plan.observable_data;

    Circuit& c = out.circuit;
    c.num_qubits = plan.layout.num_qubits;
    auto put_coords = [&](const std::map<Coord, uint32_t>& m) {
        for (const auto& [xy, q] : m)
            c.coords[q] = {static_cast<double>(xy.x), static_cast<double>(xy.y)};
    };
    put_coords(plan.layout.data_qubits);
    put_coords(plan.layout.x_ancillas);
    put_coords(plan.layout.z_ancillas);

    const auto& ancs = plan.anc_sorted;
    const uint32_t A = static_cast<uint32_t>(ancs.size());
    const uint32_t D = static_cast<uint32_t>(plan.data_sorted.size());
    auto anc_pos = [&](uint32_t anc) {
        return static_cast<uint32_t>(std::lower_bound(ancs.begin(), ancs.end(), anc) - ancs.begin());
    };
    auto data_pos = [&](uint32_t q) {
        return static_cast<uint32_t>(
            std::lower_bound(plan.data_sorted.begin(), plan.data_sorted.end(), q) -
            plan.data_sorted.begin());
    };
    auto anc_coord = [&](uint32_t anc) {
        for (const auto& [xy, q] : plan.layout.x_ancillas)
            if (q == anc) return xy;
        for (const auto& [xy, q] : plan.layout.z_ancillas)
            if (q == anc) return xy;
        return Coord{};
    };
    auto anc_is_x = [&](uint32_t anc) {
        for (const auto& [xy, q] : plan.layout.x_ancillas)
            if (q == anc) return true;
        return false;
    };

    // The class of stabilizer whose outcome is deterministic on the prepared
    // product state; its first-round and final data-parity detectors exist.
    bool det_class_is_x = spec.basis == Basis::X;
    std::vector<uint32_t> det_ancs;
    for (uint32_t anc : ancs)
        if (anc_is_x(anc) == det_class_is_x) det_ancs.push_back(anc);

    c.append(Opcode::R, plan.data_sorted);
    if (spec.basis == Basis::X) c.append(Opcode::H, plan.data_sorted);

    std::vector<Instruction> block = cycle_block(plan);
    auto emit_detector = [&](const std::vector<uint32_t>& lookbacks, uint32_t anc, int round) {
        Instruction det;
        det.op = Opcode::DETECTOR;
        for (uint32_t k : lookbacks) det.targets.push_back(Target::rec(k));
        c.append(std::move(det));
        out.detectors.push_back({anc, round, anc_is_x(anc), anc_coord(anc)});
    };

    for (int r = 0; r < spec.rounds; r++) {
        c.append(Instruction{Opcode::TICK, false, 0.0, {}});
        for (const Instruction& inst : block) c.append(inst);
        if (r == 0) {
            for (uint32_t anc : det_ancs) emit_detector({A - anc_pos(anc)}, anc, 0);
        } else {
            for (uint32_t anc : ancs)
                emit_detector({A - anc_pos(anc), 2 * A - anc_pos(anc)}, anc, r);
        }
    }

    if (spec.basis == Basis::X) c.append(Opcode::H, plan.data_sorted);
    c.append(Opcode::M, plan.data_sorted);

    for (uint32_t anc : det_ancs) {
        std::vector<uint32_t> refs;
        for (uint32_t q : plan.layout.plaquettes.at(anc)) refs.push_back(D - data_pos(q));
        refs.push_back(D + A - anc_pos(anc));
        emit_detector(refs, anc, spec.rounds);
    }

    Instruction obs;
    obs.op = Opcode::OBSERVABLE_INCLUDE;
    obs.has_arg = true;
    obs.arg = 0.0;
    for (uint32_t q : plan.observable_data) obs.targets.push_back(Target::rec(D - data_pos(q)));
    c.append(std::move(obs));
    return out;
}

}  // namespace

std::vector<Instruction> stabilizer_schedule(const LayoutMap& layout) {
    // Re-derive the layer of each plaquette member from its offset to the
    // ancilla, using the family's fixed offset order. The family is
    // recognizable from the lattice: repetition layouts have no X-ancillas,
    // rotated layouts have all-odd data coordinates.
    bool repetition = layout.x_ancillas.empty() && layout.data_qubits.begin()->first.y == 0 &&
                      layout.data_qubits.rbegin()->first.y == 0;
    bool rotated = false;
    if (!repetition) {
        rotated = true;
        for (const auto& [c, q] : layout.data_qubits)
            if (c.x % 2 == 0 || c.y % 2 == 0) rotated = false;
    }
    const Coord* z_order = repetition ? kRepOrder : (rotated ? kRotatedZOrder : kUnrotZOrder);
    const Coord* x_order = rotated ? kRotatedXOrder : kUnrotXOrder;
    const int num_layers = repetition ? 2 : 4;

    std::map<uint32_t, Coord> coord_of;
    for (const auto& [c, q] : layout.data_qubits) coord_of[q] = c;
    for (const auto& [c, q] : layout.x_ancillas) coord_of[q] = c;
    for (const auto& [c, q] : layout.z_ancillas) coord_of[q] = c;

    LayoutPlan plan;
    plan.layout = layout;
    plan.cx_layers.assign(num_layers, {});
    for (const auto& [anc, members] : layout.plaquettes) {
        bool is_x = layout.is_x_ancilla(anc);
        const Coord* order = is_x ? x_order : z_order;
        Coord ac = coord_of.at(anc);
        for (uint32_t q : members) {
            Coord dc = coord_of.at(q);
            Coord off{dc.x - ac.x, dc.y - ac.y};
            int layer = -1;
            for (int k = 0; k < num_layers; k++)
                if (order[k] == off) layer = k;
            if (layer < 0) throw std::invalid_argument("plaquette member offset not in schedule");
            if (is_x)
                plan.cx_layers[layer].push_back({anc, q});
            else
                plan.cx_layers[layer].push_back({q, anc});
        }
    }
    for (auto& layer : plan.cx_layers)
        std::sort(layer.begin(), layer.end());

    for (const auto& [c, q] : layout.data_qubits) plan.data_sorted.push_back(q);
    std::sort(plan.data_sorted.begin(), plan.data_sorted.end());
    for (const auto& [c, q] : layout.x_ancillas) plan.anc_sorted.push_back(q);
    for (const auto& [c, q] : layout.z_ancillas) plan.anc_sorted.push_back(q);
    std::sort(plan.anc_sorted.begin(), plan.anc_sorted.end());
    return cycle_block(plan);
}

GeneratedCircuit build_rotated_surface(const CodeSpec& spec) {
    if (spec.family != CodeFamily::Rotated)
        throw std::invalid_argument("spec.family must be rotated");
    check_spec(spec);
    return build_from_plan(spec, plan_rotated(spec));
}

GeneratedCircuit build_unrotated_surface(const CodeSpec& spec) {
    if (spec.family != CodeFamily::Unrotated)
        throw std::invalid_argument("spec.family must be unrotated");
    check_spec(spec);
    return build_from_plan(spec, plan_unrotated(spec));
}

GeneratedCircuit build_repetition(const CodeSpec& spec) {
    if (spec.family != CodeFamily::Repetition)
        throw std::invalid_argument("spec.family must be repetition");
    check_spec(spec);
    return build_from_plan(spec, plan_repetition(spec));
}

GeneratedCircuit build_memory_circuit(const CodeSpec& spec) {
    switch (spec.family) {
        case CodeFamily::Rotated: return build_rotated_surface(spec);
        case CodeFamily::Unrotated: return build_unrotated_surface(spec);
        case CodeFamily::Repetition: return build_repetition(spec);
    }
    throw std::invalid_argument("unknown code family");
}

ResourceCount resource_count(const CodeSpec& spec) {
    GeneratedCircuit g = build_memory_circuit(spec);
    ResourceCount rc;
    rc.qubits = g.circuit.num_qubits;
    for (const auto& inst : g.circuit.instructions) {
        if (inst.op == Opcode::H) rc.gates += inst.targets.size();
        if (inst.op == Opcode::CX || inst.op == Opcode::CZ) rc.gates += inst.targets.size() / 2;
    }
    return rc;
}

}  // namespace qec
