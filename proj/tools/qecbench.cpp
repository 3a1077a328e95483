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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qecbench/bench.hpp"
#include "qecbench/codegen.hpp"
#include "qecbench/dem.hpp"
#include "qecbench/matching_graph.hpp"
#include "qecbench/noise.hpp"
#include "qecbench/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpecError = 2;
constexpr int kExitRuntimeError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qec::SpecError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<qec::ResultRow> load_rows(const std::string& path, const std::string& family,
                                      const std::string& noise, double p, int distance) {
    auto rows = qec::rows_from_csv(read_file(path));
    std::vector<qec::ResultRow> out;
    for (const auto& r : rows) {
        if (!family.empty() && r.family != family) continue;
        if (!noise.empty() && r.noise != noise) continue;
        if (p > 0 && r.p_phys != p) continue;
        if (distance > 0 && r.distance != distance) continue;
        out.push_back(r);
    }
    if (out.empty()) throw qec::SpecError("no rows match the given filters");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface/repetition-code noise benchmarking toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit a memory-experiment circuit as text");
    std::string g_family = "rotated", g_basis = "z", g_source, g_out;
    int g_distance = 3, g_rounds = 0;
    double g_p = 0;
    gen->add_option("--family", g_family, "rotated | unrotated | repetition");
    gen->add_option("--distance", g_distance, "odd code distance >= 3");
    gen->add_option("--rounds", g_rounds, "stabilizer rounds (default 3*distance)");
    gen->add_option("--basis", g_basis, "memory basis: z | x");
    gen->add_option("--noise", g_source, "error type or noise model to inject");
    gen->add_option("--p", g_p, "physical error probability for --noise");
    gen->add_option("-o,--out", g_out, "output file (default stdout)");

    // sample
    auto* smp = app.add_subcommand("sample", "sample a circuit into a raw detector batch");
    std::string s_circuit, s_out;
    uint64_t s_shots = 1000, s_seed = 0;
    int s_workers = 1;
    smp->add_option("--circuit", s_circuit, "circuit text file")->required();
    smp->add_option("--shots", s_shots, "number of shots");
    smp->add_option("--seed", s_seed, "64-bit seed");
    smp->add_option("--workers", s_workers, "worker threads");
    smp->add_option("-o,--out", s_out, "raw batch output file")->required();

    // sweep
    auto* swp = app.add_subcommand("sweep", "run an experiment spec; emit result rows as CSV");
    std::string w_spec, w_out;
    int w_workers = 1;
    swp->add_option("--spec", w_spec, "experiment spec JSON file")->required();
    swp->add_option("--workers", w_workers, "worker threads");
    swp->add_option("-o,--out", w_out, "CSV output file (default stdout)");

    // threshold
    auto* thr = app.add_subcommand("threshold", "estimate the threshold from sweep rows");
    std::string t_rows, t_family, t_noise, t_out;
    uint64_t t_boot_seed = 1;
    thr->add_option("--rows", t_rows, "sweep CSV file")->required();
    thr->add_option("--family", t_family, "filter by family");
    thr->add_option("--noise", t_noise, "filter by noise source");
    thr->add_option("--boot-seed", t_boot_seed, "bootstrap seed");
    thr->add_option("-o,--out", t_out, "JSON output file (default stdout)");

    // fit
    auto* fit = app.add_subcommand("fit", "regression fit over sweep rows");
    std::string f_rows, f_kind = "distance", f_family, f_noise, f_out;
    double f_p = 0, f_target = 0;
    int f_distance = 0;
    fit->add_option("--rows", f_rows, "sweep CSV file")->required();
    fit->add_option("--kind", f_kind, "distance | rounds");
    fit->add_option("--family", f_family, "filter by family");
    fit->add_option("--noise", f_noise, "filter by noise source");
    fit->add_option("--p", f_p, "filter by physical error rate");
    fit->add_option("--distance", f_distance, "filter by distance (rounds fit)");
    fit->add_option("--target", f_target, "also project the distance for this logical rate");
    fit->add_option("-o,--out", f_out, "JSON output file (default stdout)");

    // table
    auto* tab = app.add_subcommand("table", "resource-minimum or improvement-factor tables");
    std::string b_rows, b_which = "resources", b_family = "rotated", b_out;
    double b_p = 1e-3, b_target = 1e-9, b_baseline = 0;
    tab->add_option("--rows", b_rows, "sweep CSV file")->required();
    tab->add_option("--which", b_which, "resources | improvement");
    tab->add_option("--family", b_family, "code family for qubit formulas");
    tab->add_option("--p", b_p, "physical error rate of the table");
    tab->add_option("--target", b_target, "target logical rate (resources table)");
    tab->add_option("--baseline", b_baseline, "baseline rate (improvement table; default --p)");
    tab->add_option("-o,--out", b_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSpecError;
    }

    try {
        if (gen->parsed()) {
            qec::CodeSpec spec;
            if (!qec::family_from_name(g_family, &spec.family))
                throw qec::SpecError("unknown family '" + g_family + "'");
            spec.distance = g_distance;
            spec.rounds = g_rounds > 0 ? g_rounds : qec::default_rounds(g_distance);
            if (g_basis == "z" || g_basis == "Z") spec.basis = qec::Basis::Z;
            else if (g_basis == "x" || g_basis == "X") spec.basis = qec::Basis::X;
            else throw qec::SpecError("basis must be z or x");
            qec::GeneratedCircuit g;
            try {
                g = qec::build_memory_circuit(spec);
            } catch (const std::invalid_argument& e) {
                throw qec::SpecError(e.what());
            }
            qec::Circuit out = g.circuit;
            if (!g_source.empty()) {
                qec::NoiseSource src;
                if (!qec::NoiseSource::from_name(g_source, &src))
                    throw qec::SpecError("unknown noise source '" + g_source + "'");
                qec::InjectionOptions opts;
                opts.data_qubits = g.data_qubits;
                out = qec::apply_noise(out, {src, g_p}, opts);
            }
            write_file(g_out, qec::serialize_circuit(out));
        } else if (smp->parsed()) {
            qec::Circuit c;
            try {
                c = qec::parse_circuit(read_file(s_circuit));
            } catch (const qec::ParseError& e) {
                throw qec::SpecError(std::string("parse error: ") + e.what());
            }
            qec::ShotBatch batch = qec::sample_batch(c, s_shots, s_seed, s_workers);
            std::ofstream out(s_out, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + s_out);
            qec::write_raw_batch(batch, out);
        } else if (swp->parsed()) {
            qec::ExperimentSpec spec = qec::spec_from_json(read_file(w_spec));
            qec::SweepResult result = qec::run_sweep(spec, w_workers);
            std::string csv = qec::rows_to_csv(result.rows);
            for (const auto& err : result.cell_errors) csv += "# cell-error " + err + "\n";
            write_file(w_out, csv);
            if (!result.cell_errors.empty()) {
                for (const auto& err : result.cell_errors) std::cerr << err << "\n";
                return kExitRuntimeError;
            }
        } else if (thr->parsed()) {
            auto rows = load_rows(t_rows, t_family, t_noise, 0, 0);
            qec::ThresholdEstimate est = qec::estimate_threshold(rows, t_boot_seed);
            nlohmann::json j;
            j["p_th"] = est.p_th;
            j["uncertainty"] = est.uncertainty;
            j["pairs"] = est.pairs_used;
            j["bootstrap_ok"] = est.bootstrap_ok;
            j["bootstrap_total"] = est.bootstrap_total;
            write_file(t_out, j.dump(2) + "\n");
        } else if (fit->parsed()) {
            auto rows = load_rows(f_rows, f_family, f_noise, f_p, f_distance);
            qec::FitResult fr;
            nlohmann::json j;
            if (f_kind == "distance") {
                fr = qec::fit_distance_scaling(rows);
                if (f_target > 0) {
                    qec::CodeFamily fam;
                    if (!qec::family_from_name(rows.front().family, &fam))
                        throw qec::SpecError("unknown family in rows");
                    int min_d = rows.front().distance;
                    for (const auto& r : rows) min_d = std::min(min_d, r.distance);
                    qec::QubitProjection proj = qec::project_qubits(fr, fam, f_target, min_d);
                    j["projection"] = {{"distance", proj.distance},
                                       {"qubits", proj.qubits},
                                       {"rounds", proj.rounds},
                                       {"clamped", proj.clamped_to_grid}};
                }
            } else if (f_kind == "rounds") {
                fr = qec::fit_rounds_curve(rows);
            } else {
                throw qec::SpecError("fit kind must be distance or rounds");
            }
            j["kind"] = fr.kind;
            j["slope"] = fr.slope;
            j["intercept"] = fr.intercept;
            j["points_used"] = fr.points_used;
            j["residuals"] = fr.residuals;
            j["notes"] = fr.notes;
            write_file(f_out, j.dump(2) + "\n");
        } else if (tab->parsed()) {
            qec::CodeFamily fam;
            if (!qec::family_from_name(b_family, &fam))
                throw qec::SpecError("unknown family '" + b_family + "'");
            if (b_which == "resources") {
                auto rows = load_rows(b_rows, b_family, "", b_p, 0);
                std::map<std::string, std::vector<qec::ResultRow>> by_source;
                for (const auto& r : rows) by_source[r.noise].push_back(r);
                std::string out = "noise,min_distance,qubits,rounds\n";
                for (const auto& [noise, group] : by_source) {
                    qec::FitResult fr = qec::fit_distance_scaling(group);
                    int min_d = group.front().distance;
                    for (const auto& r : group) min_d = std::min(min_d, r.distance);
                    qec::QubitProjection proj = qec::project_qubits(fr, fam, b_target, min_d);
                    out += noise + "," + std::to_string(proj.distance) + "," +
                           std::to_string(proj.qubits) + "," + std::to_string(proj.rounds) + "\n";
                }
                write_file(b_out, out);
            } else if (b_which == "improvement") {
                auto rows = load_rows(b_rows, b_family, "circuit_level", b_p, 0);
                double baseline = b_baseline > 0 ? b_baseline : b_p;
                auto factors = qec::improvement_factor(rows, baseline);
                std::string out = "distance,rounds,qubits,gates,factor,lower_bound\n";
                for (size_t i = 0; i < factors.size(); i++) {
                    const auto& r = rows[i];
                    qec::ResourceCount rc =
                        qec::resource_count({fam, r.distance, r.rounds, qec::Basis::Z});
                    out += std::to_string(r.distance) + "," + std::to_string(r.rounds) + "," +
                           std::to_string(rc.qubits) + "," + std::to_string(rc.gates) + "," +
                           qec::format_real(factors[i].factor) + "," +
                           (factors[i].lower_bound ? "1" : "0") + "\n";
                }
                write_file(b_out, out);
            } else {
                throw qec::SpecError("table --which must be resources or improvement");
            }
        }
    } catch (const qec::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}
