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

#ifndef QECBENCH_BENCH_HPP
#define QECBENCH_BENCH_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecbench/codegen.hpp"
#include "qecbench/noise.hpp"

namespace qec {

class SpecError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NoCrossingError : public std::runtime_error {
  public:
    NoCrossingError(int d1, int d2)
        : std::runtime_error("logical-rate curves for d=" + std::to_string(d1) + " and d=" +
                             std::to_string(d2) + " never cross within the swept grid"),
          d1_(d1), d2_(d2) {}
    int d1() const { return d1_; }
    int d2() const { return d2_; }

  private:
    int d1_, d2_;
};

class InsufficientDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ShotsPolicy {
    bool adaptive = true;
    uint64_t fixed_shots = 100000;      // used when !adaptive
    uint64_t target_failures = 100;     // adaptive stop
    uint64_t max_shots = 10000000;      // adaptive cap
};

struct ExperimentSpec {
    std::vector<CodeFamily> families{CodeFamily::Rotated};
    std::vector<int> distances{3, 5, 7};
    std::vector<int> rounds_list;  // empty -> rounds = 3*d
    Basis basis = Basis::Z;
    NoiseSource source = NoiseSource::of(NoiseModel::CircuitLevel);
    std::vector<double> p_grid;
    ShotsPolicy shots;
    uint64_t seed = 0;
};

// Twelve points log-spaced over [1e-4, 5e-2].
std::vector<double> default_p_grid();
std::vector<double> log_spaced_grid(double lo, double hi, int points);

struct ResultRow {
    std::string family;
    int distance = 0;
    int rounds = 0;
    std::string noise;
    double p_phys = 0;
    uint64_t shots = 0;
    uint64_t failures = 0;
    double p_shot = 0;
    double p_round = 0;
    double stderr_ = 0;  // binomial, on p_shot
    uint64_t seed = 0;
};

struct SweepResult {
    std::vector<ResultRow> rows;
    std::vector<std::string> cell_errors;
};

// Full pipeline per grid cell: build circuit, inject noise, extract the
// detector error model, build matching graphs, sample in chunks, decode,
// count failures. Deterministic for a fixed spec seed at any worker count.
SweepResult run_sweep(const ExperimentSpec& spec, int workers = 1,
                      const std::function<void(const ResultRow&)>& on_row = {});

// 1 - (1 - p_shot)^(1/rounds); saturates to 1 at p_shot == 1.
double per_round_rate(double p_shot, int rounds);

// CSV with the exact column set
// family,distance,rounds,noise,p_phys,shots,failures,p_shot,p_round,stderr,seed
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);

struct ThresholdEstimate {
    double p_th = 0;
    double uncertainty = 0;  // bootstrap half-width
    std::vector<std::pair<int, int>> pairs_used;
    int bootstrap_ok = 0;
    int bootstrap_total = 0;
};

// Crossing of log(p_round) vs log(p_phys) between adjacent distances,
// located by piecewise-linear interpolation; the estimate is the median over
// adjacent pairs and the uncertainty comes from binomial bootstrap
// resampling of every row. Rows must share family and noise source.
ThresholdEstimate estimate_threshold(const std::vector<ResultRow>& rows, uint64_t boot_seed = 1,
                                     int replicates = 200);

struct FitResult {
    std::string kind;
    double slope = 0;      // per unit distance, or per ln(rounds)
    double intercept = 0;
    std::vector<double> residuals;
    int points_used = 0;
    std::vector<std::string> notes;
};

// Weighted least squares of log10(p_round) against code distance at fixed
// p_phys. Zero-failure rows are excluded (noted); fewer than 3 usable rows
// is an error.
FitResult fit_distance_scaling(const std::vector<ResultRow>& rows);

// Least squares of p_round against ln(rounds) at fixed distance and p_phys.
FitResult fit_rounds_curve(const std::vector<ResultRow>& rows);

// Smallest integer distance whose fitted rate meets the target.
int project_distance(const FitResult& fit, double target_rate);

struct QubitProjection {
    int distance = 0;        // rounded up to the next odd integer
    uint64_t qubits = 0;
    int rounds = 0;          // 3 * distance
    bool clamped_to_grid = false;
    std::string note;
};
QubitProjection project_qubits(const FitResult& fit, CodeFamily family, double target,
                               int min_grid_distance = 3);

struct ImprovementRow {
    int distance = 0;
    double factor = 0;
    bool lower_bound = false;  // zero observed failures; factor is a bound
};
std::vector<ImprovementRow> improvement_factor(const std::vector<ResultRow>& rows,
                                               double baseline_p);

// JSON <-> spec (CLI surface). Field names mirror ExperimentSpec.
ExperimentSpec spec_from_json(const std::string& text);

}  // namespace qec

#endif
