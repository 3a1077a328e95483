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

#include "qecbench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qecbench/decode.hpp"
#include "qecbench/dem.hpp"
#include "qecbench/matching_graph.hpp"
#include "qecbench/rng.hpp"
#include "qecbench/sim.hpp"

namespace qec {

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
    std::vector<double> grid;
    if (points == 1) return {lo};
    for (int i = 0; i < points; i++)
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    return grid;
}

std::vector<double> default_p_grid() { return log_spaced_grid(1e-4, 5e-2, 12); }

double per_round_rate(double p_shot, int rounds) {
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (p_shot < 0 || p_shot > 1) throw std::invalid_argument("p_shot outside [0,1]");
    if (p_shot >= 1.0) return 1.0;  // saturated
    return 1.0 - std::pow(1.0 - p_shot, 1.0 / static_cast<double>(rounds));
}

namespace {

void check_spec(const ExperimentSpec& spec) {
    if (spec.families.empty() || spec.distances.empty() || spec.p_grid.empty())
        throw SpecError("families, distances and p_grid must be nonempty");
    for (int d : spec.distances)
        if (d < 3 || d % 2 == 0) throw SpecError("distances must be odd and >= 3");
    for (int r : spec.rounds_list)
        if (r < 1) throw SpecError("rounds must be >= 1");
    for (double p : spec.p_grid)
        if (!(p >= 0.0) || p > 0.5) throw SpecError("grid probabilities must lie in [0, 1/2]");
    if (!spec.shots.adaptive && spec.shots.fixed_shots == 0)
        throw SpecError("fixed shots policy requires shots >= 1");
}

uint64_t next_chunk(uint64_t chunk_index) {
    // 256, 1024, 4096, ..., capped at 2^18 per chunk. Fixed schedule so the
    // adaptive stopping point is identical for every worker count.
    if (chunk_index >= 5) return 1ull << 18;
    return 256ull << (2 * chunk_index);
}

ResultRow run_cell(CodeFamily family, int distance, int rounds, Basis basis,
                   const NoiseSource& source, double p, const ShotsPolicy& policy,
                   uint64_t cell_seed, int workers) {
    CodeSpec cs{family, distance, rounds, basis};
    GeneratedCircuit g = build_memory_circuit(cs);
    InjectionOptions opts;
    opts.data_qubits = g.data_qubits;
    NoiseSpec noise{source, p};
    Circuit noisy = apply_noise(g.circuit, noise, opts);
    CompiledCircuit compiled = CompiledCircuit::compile(noisy);

    DetectorErrorModel dem = extract_dem(noisy);
    SplitResult split = split_xz(dem, g);
    MatchingGraph zg = dem_to_matching_graph(split.z_dem);
    MatchingGraph xg = dem_to_matching_graph(split.x_dem);
    std::vector<const MatchingGraph*> graphs;
    if (!zg.nodes.empty()) graphs.push_back(&zg);
    if (!xg.nodes.empty()) graphs.push_back(&xg);

    uint64_t shots_done = 0, failures = 0, chunk_index = 0;
    uint64_t budget = policy.adaptive ? policy.max_shots : policy.fixed_shots;
    while (shots_done < budget) {
        uint64_t want = std::min(next_chunk(chunk_index), budget - shots_done);
        chunk_index++;
        ShotBatch batch = sample_range(compiled, shots_done, want, cell_seed, workers);
        if (!graphs.empty()) {
            ShotBatch pred = decode_batch(graphs, batch, workers);
            failures += logical_error_count(batch, pred);
        } else {
            ShotBatch pred(0, batch.num_observables, batch.shots);
            failures += logical_error_count(batch, pred);
        }
        shots_done += want;
        if (policy.adaptive && failures >= policy.target_failures) break;
    }

    ResultRow row;
    row.family = family_name(family);
    row.distance = distance;
    row.rounds = rounds;
    row.noise = source.name();
    row.p_phys = p;
    row.shots = shots_done;
    row.failures = failures;
    row.p_shot = shots_done ? static_cast<double>(failures) / static_cast<double>(shots_done) : 0;
    row.p_round = per_round_rate(row.p_shot, rounds);
    row.stderr_ = shots_done ? std::sqrt(row.p_shot * (1 - row.p_shot) /
                                         static_cast<double>(shots_done))
                             : 0;
    row.seed = cell_seed;
    return row;
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec, int workers,
                      const std::function<void(const ResultRow&)>& on_row) {
    check_spec(spec);
    SweepResult out;
    uint64_t cell_index = 0;
    for (CodeFamily family : spec.families) {
        for (int d : spec.distances) {
            std::vector<int> rounds =
                spec.rounds_list.empty() ? std::vector<int>{default_rounds(d)} : spec.rounds_list;
            for (int r : rounds) {
                for (double p : spec.p_grid) {
                    uint64_t cell_seed = mix_seed(spec.seed, cell_index++);
                    try {
                        ResultRow row = run_cell(family, d, r, spec.basis, spec.source, p,
                                                 spec.shots, cell_seed, workers);
                        if (on_row) on_row(row);
                        out.rows.push_back(std::move(row));
                    } catch (const std::exception& e) {
                        std::ostringstream msg;
                        msg << "cell family=" << family_name(family) << " d=" << d << " rounds="
                            << r << " p=" << format_real(p) << ": " << e.what();
                        out.cell_errors.push_back(msg.str());
                    }
                }
            }
        }
    }
    return out;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "family,distance,rounds,noise,p_phys,shots,failures,p_shot,p_round,stderr,seed\n";
    for (const auto& r : rows) {
        out += r.family + ',' + std::to_string(r.distance) + ',' + std::to_string(r.rounds) + ',' +
               r.noise + ',' + format_real(r.p_phys) + ',' + std::to_string(r.shots) + ',' +
               std::to_string(r.failures) + ',' + format_real(r.p_shot) + ',' +
               format_real(r.p_round) + ',' + format_real(r.stderr_) + ',' +
               std::to_string(r.seed) + '\n';
    }
    return out;
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
    std::vector<ResultRow> rows;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            if (line.rfind("family,", 0) == 0) continue;
        }
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        if (f.size() != 11) throw std::runtime_error("bad CSV row: " + line);
        ResultRow r;
        r.family = f[0];
        r.distance = std::stoi(f[1]);
        r.rounds = std::stoi(f[2]);
        r.noise = f[3];
        r.p_phys = std::strtod(f[4].c_str(), nullptr);
        r.shots = std::stoull(f[5]);
        r.failures = std::stoull(f[6]);
        r.p_shot = std::strtod(f[7].c_str(), nullptr);
        r.p_round = std::strtod(f[8].c_str(), nullptr);
        r.stderr_ = std::strtod(f[9].c_str(), nullptr);
        r.seed = std::stoull(f[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

struct CurvePoint {
    double p;
    double ln_rate;
    double sigma_ln;
};

// sigma of ln(p_round) propagated from the binomial stderr on p_shot.
double sigma_ln_round(const ResultRow& r) {
    if (r.p_shot <= 0 || r.p_shot >= 1 || r.p_round <= 0) return HUGE_VAL;
    double dpr_dps = (1.0 / r.rounds) * std::pow(1 - r.p_shot, 1.0 / r.rounds - 1.0);
    double sigma_pr = r.stderr_ * dpr_dps;
    return sigma_pr / r.p_round;
}

std::map<int, std::vector<CurvePoint>> curves_by_distance(const std::vector<ResultRow>& rows) {
    std::map<int, std::vector<CurvePoint>> curves;
    for (const auto& r : rows) {
        // Zero-failure rows have no log rate; fully saturated rows have no
        // usable rate either (p_round pins to 1 and the error bar vanishes).
        if (r.failures == 0 || r.failures >= r.shots) continue;
        curves[r.distance].push_back({r.p_phys, std::log(r.p_round), sigma_ln_round(r)});
    }
    for (auto& [d, pts] : curves)
        std::sort(pts.begin(), pts.end(),
                  [](const CurvePoint& a, const CurvePoint& b) { return a.p < b.p; });
    return curves;
}

// Crossing of the (d2 - d1) log-rate difference, scanned from the top of the
// grid down; prefers brackets whose positive side clears 2 sigma plus an
// absolute floor so that saturation wiggle at the very top of a grid does
// not fake a crossing.
double pair_crossing(const std::vector<CurvePoint>& c1, const std::vector<CurvePoint>& c2,
                     int d1, int d2) {
    constexpr double kSeparationFloor = 0.02;  // ln units
    std::vector<double> ps, delta, sigma;
    size_t i = 0, j = 0;
    while (i < c1.size() && j < c2.size()) {
        if (c1[i].p < c2[j].p) { i++; continue; }
        if (c2[j].p < c1[i].p) { j++; continue; }
        ps.push_back(c1[i].p);
        delta.push_back(c2[j].ln_rate - c1[i].ln_rate);
        sigma.push_back(std::sqrt(c1[i].sigma_ln * c1[i].sigma_ln +
                                  c2[j].sigma_ln * c2[j].sigma_ln));
        i++; j++;
    }
    if (ps.size() < 2) throw NoCrossingError(d1, d2);
    auto interp = [&](size_t hi) {
        double x0 = std::log(ps[hi - 1]), x1 = std::log(ps[hi]);
        double y0 = delta[hi - 1], y1 = delta[hi];
        return std::exp(x0 + (0 - y0) * (x1 - x0) / (y1 - y0));
    };
    for (size_t hi = ps.size() - 1; hi >= 1; hi--)
        if (delta[hi] > 0 && delta[hi - 1] <= 0 &&
            delta[hi] >= std::max(2 * sigma[hi], kSeparationFloor))
            return interp(hi);
    for (size_t hi = ps.size() - 1; hi >= 1; hi--)
        if (delta[hi] > 0 && delta[hi - 1] <= 0) return interp(hi);
    throw NoCrossingError(d1, d2);
}

double estimate_from_rows(const std::vector<ResultRow>& rows,
                          std::vector<std::pair<int, int>>* pairs_out) {
    auto curves = curves_by_distance(rows);
    if (curves.size() < 2)
        throw InsufficientDataError("threshold estimation needs at least two distances");
    std::vector<int> ds;
    for (const auto& [d, c] : curves) ds.push_back(d);
    std::vector<double> crossings;
    for (size_t k = 0; k + 1 < ds.size(); k++) {
        crossings.push_back(pair_crossing(curves[ds[k]], curves[ds[k + 1]], ds[k], ds[k + 1]));
        if (pairs_out) pairs_out->push_back({ds[k], ds[k + 1]});
    }
    std::sort(crossings.begin(), crossings.end());
    size_t n = crossings.size();
    return n % 2 ? crossings[n / 2] : 0.5 * (crossings[n / 2 - 1] + crossings[n / 2]);
}

uint64_t sample_binomial(uint64_t n, double p, CounterRng& rng) {
    if (p <= 0) return 0;
    if (p >= 1) return n;
    double mean = static_cast<double>(n) * p;
    if (mean < 64 || static_cast<double>(n) * (1 - p) < 64) {
        // Exact via geometric skipping over the Bernoulli sequence.
        uint64_t count = 0, pos = 0;
        double log1mp = std::log1p(-(p <= 0.5 ? p : 1 - p));
        bool flip = p > 0.5;
        for (;;) {
            double u = rng.next_double_nz();
            double skip = std::floor(std::log(u) / log1mp);
            if (skip >= static_cast<double>(n - pos)) break;
            pos += static_cast<uint64_t>(skip) + 1;
            count++;
            if (pos >= n) break;
        }
        return flip ? n - count : count;
    }
    // Normal approximation is plenty for bootstrap resampling.
    double u1 = rng.next_double_nz(), u2 = rng.next_double();
    double z = std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
    double v = mean + z * std::sqrt(mean * (1 - p));
    if (v < 0) v = 0;
    if (v > static_cast<double>(n)) v = static_cast<double>(n);
    return static_cast<uint64_t>(std::llround(v));
}

}  // namespace

ThresholdEstimate estimate_threshold(const std::vector<ResultRow>& rows, uint64_t boot_seed,
                                     int replicates) {
    for (const auto& r : rows) {
        if (r.family != rows.front().family || r.noise != rows.front().noise)
            throw std::invalid_argument("threshold rows must share family and noise source");
    }
    ThresholdEstimate est;
    est.p_th = estimate_from_rows(rows, &est.pairs_used);
    est.bootstrap_total = replicates;

    std::vector<double> boots;
    for (int rep = 0; rep < replicates; rep++) {
        std::vector<ResultRow> resampled = rows;
        for (size_t i = 0; i < resampled.size(); i++) {
            CounterRng rng(boot_seed, (static_cast<uint64_t>(rep) << 32) | i);
            ResultRow& r = resampled[i];
            r.failures = sample_binomial(r.shots, r.p_shot, rng);
            r.p_shot = r.shots ? static_cast<double>(r.failures) / r.shots : 0;
            r.p_round = per_round_rate(r.p_shot, r.rounds);
            r.stderr_ = r.shots ? std::sqrt(r.p_shot * (1 - r.p_shot) / r.shots) : 0;
        }
        try {
            boots.push_back(estimate_from_rows(resampled, nullptr));
        } catch (const std::exception&) {
        }
    }
    est.bootstrap_ok = static_cast<int>(boots.size());
    if (boots.size() >= 8) {
        std::sort(boots.begin(), boots.end());
        size_t lo = static_cast<size_t>(0.025 * (boots.size() - 1));
        size_t hi = static_cast<size_t>(std::ceil(0.975 * (boots.size() - 1)));
        est.uncertainty = 0.5 * (boots[hi] - boots[lo]);
    } else {
        est.uncertainty = est.p_th;  // too few successful replicates to bound
    }
    return est;
}

FitResult fit_distance_scaling(const std::vector<ResultRow>& rows) {
    FitResult fit;
    fit.kind = "log10_rate_vs_distance";
    std::vector<double> x, y, w;
    for (const auto& r : rows) {
        if (r.failures == 0) {
            fit.notes.push_back("d=" + std::to_string(r.distance) +
                                " excluded: zero logical failures");
            continue;
        }
        double sigma = sigma_ln_round(r) / std::log(10.0);
        x.push_back(r.distance);
        y.push_back(std::log10(r.p_round));
        w.push_back(sigma > 0 && std::isfinite(sigma) ? 1.0 / (sigma * sigma) : 1.0);
    }
    if (x.size() < 3)
        throw InsufficientDataError("distance fit needs >= 3 distances with nonzero failures");
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); i++) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    double denom = sw * sxx - sx * sx;
    fit.slope = (sw * sxy - sx * sy) / denom;
    fit.intercept = (sxx * sy - sx * sxy) / denom;
    for (size_t i = 0; i < x.size(); i++)
        fit.residuals.push_back(y[i] - (fit.slope * x[i] + fit.intercept));
    fit.points_used = static_cast<int>(x.size());
    return fit;
}

FitResult fit_rounds_curve(const std::vector<ResultRow>& rows) {
    FitResult fit;
    fit.kind = "rate_vs_log_rounds";
    std::vector<double> x, y;
    for (const auto& r : rows) {
        if (r.failures == 0) {
            fit.notes.push_back("rounds=" + std::to_string(r.rounds) +
                                " excluded: zero logical failures");
            continue;
        }
        x.push_back(std::log(static_cast<double>(r.rounds)));
        y.push_back(r.p_round);
    }
    if (x.size() < 3)
        throw InsufficientDataError("rounds fit needs >= 3 round counts with nonzero failures");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); i++) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sxx * sy - sx * sxy) / denom;
    for (size_t i = 0; i < x.size(); i++)
        fit.residuals.push_back(y[i] - (fit.slope * x[i] + fit.intercept));
    fit.points_used = static_cast<int>(x.size());
    return fit;
}

int project_distance(const FitResult& fit, double target_rate) {
    if (fit.kind != "log10_rate_vs_distance")
        throw std::invalid_argument("projection requires a distance-scaling fit");
    if (fit.slope >= 0)
        throw std::invalid_argument("fit slope is non-negative; no distance meets the target");
    double d = (std::log10(target_rate) - fit.intercept) / fit.slope;
    int di = static_cast<int>(std::ceil(d - 1e-9));
    return std::max(di, 1);
}

QubitProjection project_qubits(const FitResult& fit, CodeFamily family, double target,
                               int min_grid_distance) {
    QubitProjection out;
    int d = project_distance(fit, target);
    if (d <= min_grid_distance) {
        out.clamped_to_grid = d < min_grid_distance;
        if (out.clamped_to_grid)
            out.note = "target met below the smallest fitted distance; clamped";
        d = std::max(d, min_grid_distance);
    }
    if (d % 2 == 0) d++;
    out.distance = d;
    out.qubits = family_qubit_count(family, d);
    out.rounds = default_rounds(d);
    return out;
}

std::vector<ImprovementRow> improvement_factor(const std::vector<ResultRow>& rows,
                                               double baseline_p) {
    if (baseline_p <= 0) throw std::invalid_argument("baseline must be positive");
    std::vector<ImprovementRow> out;
    for (const auto& r : rows) {
        ImprovementRow ir;
        ir.distance = r.distance;
        if (r.failures == 0) {
            ir.lower_bound = true;
            double bound = per_round_rate(1.0 / std::max<uint64_t>(r.shots, 1), r.rounds);
            ir.factor = baseline_p / bound;
        } else {
            ir.factor = baseline_p / r.p_round;
        }
        out.push_back(ir);
    }
    return out;
}

ExperimentSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw SpecError(std::string("bad spec JSON: ") + e.what());
    }
    ExperimentSpec spec;
    try {
        if (j.contains("families")) {
            spec.families.clear();
            for (const auto& f : j["families"]) {
                CodeFamily fam;
                if (!family_from_name(f.get<std::string>(), &fam))
                    throw SpecError("unknown family '" + f.get<std::string>() + "'");
                spec.families.push_back(fam);
            }
        }
        if (j.contains("distances")) spec.distances = j["distances"].get<std::vector<int>>();
        if (j.contains("rounds")) {
            if (j["rounds"].is_array())
                spec.rounds_list = j["rounds"].get<std::vector<int>>();
            else if (!(j["rounds"].is_string() && j["rounds"].get<std::string>() == "3d"))
                throw SpecError("rounds must be an array or \"3d\"");
        }
        if (j.contains("basis")) {
            std::string b = j["basis"].get<std::string>();
            if (b == "z" || b == "Z") spec.basis = Basis::Z;
            else if (b == "x" || b == "X") spec.basis = Basis::X;
            else throw SpecError("basis must be \"z\" or \"x\"");
        }
        if (j.contains("noise")) {
            const auto& n = j["noise"];
            std::string src = n.at("source").get<std::string>();
            if (!NoiseSource::from_name(src, &spec.source))
                throw SpecError("unknown noise source '" + src + "'");
            if (n.contains("p")) spec.p_grid = {n["p"].get<double>()};
        }
        if (j.contains("p_grid")) {
            if (j["p_grid"].is_array()) {
                spec.p_grid = j["p_grid"].get<std::vector<double>>();
            } else {
                const auto& g = j["p_grid"];
                spec.p_grid = log_spaced_grid(g.at("min").get<double>(), g.at("max").get<double>(),
                                              g.at("points").get<int>());
            }
        }
        if (spec.p_grid.empty()) spec.p_grid = default_p_grid();
        if (j.contains("shots")) {
            const auto& s = j["shots"];
            if (s.is_number_unsigned() || s.is_number_integer()) {
                spec.shots.adaptive = false;
                spec.shots.fixed_shots = s.get<uint64_t>();
            } else {
                std::string policy = s.value("policy", "adaptive");
                if (policy == "fixed") {
                    spec.shots.adaptive = false;
                    spec.shots.fixed_shots = s.at("shots").get<uint64_t>();
                } else if (policy == "adaptive") {
                    spec.shots.adaptive = true;
                    if (s.contains("target_failures"))
                        spec.shots.target_failures = s["target_failures"].get<uint64_t>();
                    if (s.contains("max_shots"))
                        spec.shots.max_shots = s["max_shots"].get<uint64_t>();
                } else {
                    throw SpecError("shots policy must be \"fixed\" or \"adaptive\"");
                }
            }
        }
        if (j.contains("seed")) spec.seed = j["seed"].get<uint64_t>();
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError(std::string("bad spec JSON: ") + e.what());
    }
    return spec;
}

}  // namespace qec
