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

#include <cmath>

#include <doctest.h>

using namespace qec;

namespace {

// Synthetic rows following p_round = A * (p / p0)^((d+1)/2).
std::vector<ResultRow> synthetic_crossing_rows(double p0, double amp,
                                               const std::vector<int>& distances,
                                               const std::vector<double>& grid) {
    std::vector<ResultRow> rows;
    for (int d : distances) {
        for (double p : grid) {
            ResultRow r;
            r.family = "rotated";
            r.distance = d;
            r.rounds = 3 * d;
            r.noise = "circuit_level";
            r.p_phys = p;
            r.shots = 100000000ull;
            double pr = amp * std::pow(p / p0, (d + 1) / 2.0);
            if (pr > 0.9) pr = 0.9;
            r.p_round = pr;
            r.p_shot = 1.0 - std::pow(1.0 - pr, r.rounds);
            r.failures = static_cast<uint64_t>(std::llround(r.p_shot * r.shots));
            if (r.failures == 0) r.failures = 1;
            r.stderr_ = std::sqrt(r.p_shot * (1 - r.p_shot) / r.shots);
            rows.push_back(r);
        }
    }
    return rows;
}

}  // namespace

TEST_CASE("per-round conversion") {
    CHECK(per_round_rate(0.0, 7) == 0.0);
    CHECK(per_round_rate(0.37, 1) == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(per_round_rate(0.09, 9) == doctest::Approx(0.010424).epsilon(1e-4));
    CHECK(per_round_rate(1.0, 5) == 1.0);
    CHECK_THROWS_AS(per_round_rate(-0.1, 5), std::invalid_argument);
    CHECK_THROWS_AS(per_round_rate(0.1, 0), std::invalid_argument);
}

TEST_CASE("threshold estimation on synthetic power-law curves") {
    auto grid = log_spaced_grid(1e-3, 1e-1, 13);
    auto rows = synthetic_crossing_rows(0.01, 0.08, {3, 5, 7}, grid);
    ThresholdEstimate est = estimate_threshold(rows, 17, 100);
    CHECK(std::abs(est.p_th - 0.01) < 5e-4);
    CHECK(est.pairs_used.size() == 2);
    CHECK(est.uncertainty > 0);
    CHECK(est.uncertainty < 0.005);
    CHECK(est.bootstrap_ok > 80);
}

TEST_CASE("uniformly worse larger distances give a no-crossing error") {
    std::vector<ResultRow> rows;
    for (int d : {3, 5}) {
        for (double p : log_spaced_grid(1e-3, 1e-1, 8)) {
            ResultRow r;
            r.family = "rotated";
            r.distance = d;
            r.rounds = 3 * d;
            r.noise = "gate";
            r.p_phys = p;
            r.shots = 1000000;
            r.p_round = 0.01 * d * p / 1e-3;
            if (r.p_round > 0.9) r.p_round = 0.9;
            r.p_shot = 1.0 - std::pow(1.0 - r.p_round, r.rounds);
            r.failures = static_cast<uint64_t>(std::llround(r.p_shot * r.shots));
            if (r.failures == 0) r.failures = 1;
            r.stderr_ = std::sqrt(r.p_shot * (1 - r.p_shot) / r.shots);
            rows.push_back(r);
        }
    }
    CHECK_THROWS_AS(estimate_threshold(rows, 1, 10), NoCrossingError);
    try {
        estimate_threshold(rows, 1, 10);
    } catch (const NoCrossingError& e) {
        CHECK(e.d1() == 3);
        CHECK(e.d2() == 5);
    }
}

TEST_CASE("distance fit recovers an exact line") {
    std::vector<ResultRow> rows;
    for (int d : {3, 5, 7, 9}) {
        ResultRow r;
        r.family = "rotated";
        r.distance = d;
        r.rounds = 3 * d;
        r.noise = "depolarizing";
        r.p_phys = 1e-3;
        r.shots = 1000000;
        r.p_round = std::pow(10.0, -0.5 * d - 1.0);
        r.p_shot = 1.0 - std::pow(1.0 - r.p_round, r.rounds);
        r.failures = 1000;
        r.stderr_ = std::sqrt(r.p_shot * (1 - r.p_shot) / r.shots);
        rows.push_back(r);
    }
    FitResult fit = fit_distance_scaling(rows);
    CHECK(std::abs(fit.slope - (-0.5)) < 1e-9);
    CHECK(std::abs(fit.intercept - (-1.0)) < 1e-9);
    CHECK(fit.points_used == 4);
    for (double res : fit.residuals) CHECK(std::abs(res) < 1e-9);

    SUBCASE("projection inverts the line") {
        CHECK(project_distance(fit, 1e-10) == 18);
        QubitProjection proj = project_qubits(fit, CodeFamily::Rotated, 1e-10, 3);
        CHECK(proj.distance == 19);  // rounded up to odd
        CHECK(proj.qubits == 2 * 19 * 19 - 1);
        CHECK(proj.rounds == 57);
        CHECK(!proj.clamped_to_grid);
    }
    SUBCASE("easy targets clamp to the smallest fitted distance") {
        QubitProjection proj = project_qubits(fit, CodeFamily::Rotated, 0.5, 3);
        CHECK(proj.distance == 3);
        CHECK(proj.clamped_to_grid);
    }
}

TEST_CASE("zero-failure rows are excluded and can starve the fit") {
    std::vector<ResultRow> rows;
    for (int d : {3, 5, 7}) {
        ResultRow r;
        r.family = "rotated";
        r.distance = d;
        r.rounds = 3 * d;
        r.noise = "reset";
        r.p_phys = 1e-3;
        r.shots = 1000;
        r.failures = d == 3 ? 10 : 0;
        r.p_shot = static_cast<double>(r.failures) / r.shots;
        r.p_round = per_round_rate(r.p_shot, r.rounds);
        r.stderr_ = std::sqrt(r.p_shot * (1 - r.p_shot) / r.shots);
        rows.push_back(r);
    }
    CHECK_THROWS_AS(fit_distance_scaling(rows), InsufficientDataError);
}

TEST_CASE("rounds fit recovers an exact logarithmic curve") {
    std::vector<ResultRow> rows;
    for (int rounds : {3, 6, 12, 24, 48}) {
        ResultRow r;
        r.family = "rotated";
        r.distance = 3;
        r.rounds = rounds;
        r.noise = "circuit_level";
        r.p_phys = 1e-4;
        r.shots = 1000000;
        r.failures = 100;
        r.p_round = 0.02 - 0.003 * std::log(static_cast<double>(rounds));
        r.p_shot = 1.0 - std::pow(1.0 - r.p_round, rounds);
        r.stderr_ = 1e-5;
        rows.push_back(r);
    }
    FitResult fit = fit_rounds_curve(rows);
    CHECK(std::abs(fit.slope - (-0.003)) < 1e-9);
    CHECK(std::abs(fit.intercept - 0.02) < 1e-9);

    SUBCASE("constant data fits slope zero") {
        for (auto& r : rows) r.p_round = 0.01;
        FitResult flat = fit_rounds_curve(rows);
        CHECK(std::abs(flat.slope) < 1e-12);
        CHECK(std::abs(flat.intercept - 0.01) < 1e-12);
    }
}

TEST_CASE("improvement factors") {
    std::vector<ResultRow> rows(2);
    rows[0].distance = 3;
    rows[0].rounds = 9;
    rows[0].shots = 100000;
    rows[0].failures = 900;
    rows[0].p_round = 1e-3;
    rows[1].distance = 5;
    rows[1].rounds = 15;
    rows[1].shots = 100000;
    rows[1].failures = 0;
    rows[1].p_round = 0;
    auto factors = improvement_factor(rows, 1e-3);
    REQUIRE(factors.size() == 2);
    CHECK(factors[0].factor == doctest::Approx(1.0));
    CHECK(!factors[0].lower_bound);
    CHECK(factors[1].lower_bound);
    CHECK(factors[1].factor > 1.0);
}

TEST_CASE("row CSV round trip and exact header") {
    std::vector<ResultRow> rows(1);
    rows[0] = {"rotated", 3, 9, "circuit_level", 1e-3, 12345, 67, 67.0 / 12345,
               per_round_rate(67.0 / 12345, 9), std::sqrt((67.0 / 12345) * (1 - 67.0 / 12345) / 12345),
               0xDEADBEEFull};
    std::string csv = rows_to_csv(rows);
    CHECK(csv.rfind("family,distance,rounds,noise,p_phys,shots,failures,p_shot,p_round,stderr,seed\n",
                    0) == 0);
    auto back = rows_from_csv(csv);
    REQUIRE(back.size() == 1);
    CHECK(back[0].family == rows[0].family);
    CHECK(back[0].distance == rows[0].distance);
    CHECK(back[0].rounds == rows[0].rounds);
    CHECK(back[0].noise == rows[0].noise);
    CHECK(back[0].p_phys == rows[0].p_phys);
    CHECK(back[0].shots == rows[0].shots);
    CHECK(back[0].failures == rows[0].failures);
    CHECK(back[0].p_shot == rows[0].p_shot);
    CHECK(back[0].p_round == rows[0].p_round);
    CHECK(back[0].stderr_ == rows[0].stderr_);
    CHECK(back[0].seed == rows[0].seed);
    // per-round identity holds bit-exactly on the reparsed row
    CHECK(back[0].p_round == per_round_rate(back[0].p_shot, back[0].rounds));
}

TEST_CASE("experiment spec JSON") {
    SUBCASE("full spec") {
        ExperimentSpec spec = spec_from_json(R"({
            "families": ["rotated", "repetition"],
            "distances": [3, 5],
            "rounds": "3d",
            "noise": {"source": "circuit_level", "p": 1e-3},
            "shots": {"policy": "adaptive", "target_failures": 50, "max_shots": 1000000},
            "seed": 99
        })");
        CHECK(spec.families.size() == 2);
        CHECK(spec.distances == std::vector<int>{3, 5});
        CHECK(spec.rounds_list.empty());
        CHECK(spec.source.is_model);
        CHECK(spec.p_grid == std::vector<double>{1e-3});
        CHECK(spec.shots.adaptive);
        CHECK(spec.shots.target_failures == 50);
        CHECK(spec.shots.max_shots == 1000000);
        CHECK(spec.seed == 99);
    }
    SUBCASE("grid object and fixed shots") {
        ExperimentSpec spec = spec_from_json(R"({
            "noise": {"source": "gate"},
            "p_grid": {"min": 1e-4, "max": 5e-2, "points": 12},
            "shots": {"policy": "fixed", "shots": 5000}
        })");
        CHECK(spec.p_grid.size() == 12);
        CHECK(spec.p_grid.front() == doctest::Approx(1e-4));
        CHECK(spec.p_grid.back() == doctest::Approx(5e-2));
        CHECK(!spec.shots.adaptive);
        CHECK(spec.shots.fixed_shots == 5000);
    }
    SUBCASE("default grid") {
        ExperimentSpec spec = spec_from_json(R"({"noise": {"source": "gate"}})");
        CHECK(spec.p_grid.size() == 12);
    }
    SUBCASE("bad specs throw SpecError") {
        CHECK_THROWS_AS(spec_from_json("{"), SpecError);
        CHECK_THROWS_AS(spec_from_json(R"({"noise": {"source": "cosmic_rays"}})"), SpecError);
        CHECK_THROWS_AS(spec_from_json(R"({"families": ["toric"]})"), SpecError);
        CHECK_THROWS_AS(spec_from_json(R"({"shots": {"policy": "guess"}})"), SpecError);
    }
}

TEST_CASE("run_sweep integration") {
    ExperimentSpec spec;
    spec.families = {CodeFamily::Repetition};
    spec.distances = {3};
    spec.source = NoiseSource::of(NoiseModel::CircuitLevel);
    spec.p_grid = {0.0, 0.01};
    spec.shots.adaptive = false;
    spec.shots.fixed_shots = 2000;
    spec.seed = 5;

    SweepResult a = run_sweep(spec, 1);
    REQUIRE(a.rows.size() == 2);
    CHECK(a.cell_errors.empty());
    CHECK(a.rows[0].failures == 0);  // p = 0
    CHECK(a.rows[0].p_round == 0.0);
    CHECK(a.rows[1].failures > 0);
    CHECK(a.rows[1].shots == 2000);
    CHECK(a.rows[1].p_round == per_round_rate(a.rows[1].p_shot, a.rows[1].rounds));

    SUBCASE("byte-identical CSV across worker counts and reruns") {
        SweepResult b = run_sweep(spec, 2);
        CHECK(rows_to_csv(a.rows) == rows_to_csv(b.rows));
        SweepResult c = run_sweep(spec, 1);
        CHECK(rows_to_csv(a.rows) == rows_to_csv(c.rows));
    }
    SUBCASE("adaptive policy stops after enough failures") {
        ExperimentSpec ad = spec;
        ad.p_grid = {0.05};
        ad.shots.adaptive = true;
        ad.shots.target_failures = 20;
        ad.shots.max_shots = 1000000;
        SweepResult r = run_sweep(ad, 2);
        REQUIRE(r.rows.size() == 1);
        CHECK(r.rows[0].failures >= 20);
        CHECK(r.rows[0].shots < 1000000);
    }
    SUBCASE("invalid spec is rejected") {
        ExperimentSpec bad = spec;
        bad.distances = {4};
        CHECK_THROWS_AS(run_sweep(bad, 1), SpecError);
        bad = spec;
        bad.p_grid = {0.7};
        CHECK_THROWS_AS(run_sweep(bad, 1), SpecError);
    }
}

TEST_CASE("sub-threshold ordering d=3 vs d=5 at moderate cost") {
    ExperimentSpec spec;
    spec.families = {CodeFamily::Rotated};
    spec.distances = {3, 5};
    spec.source = NoiseSource::of(NoiseModel::CircuitLevel);
    spec.p_grid = {1e-3};
    spec.shots.adaptive = true;
    spec.shots.target_failures = 40;
    spec.shots.max_shots = 300000;
    spec.seed = 11;
    SweepResult r = run_sweep(spec, 2);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.cell_errors.empty());
    CHECK(r.rows[0].p_round > r.rows[1].p_round);
    CHECK(r.rows[0].failures > 0);
}
