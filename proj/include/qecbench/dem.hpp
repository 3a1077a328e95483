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

#ifndef QECBENCH_DEM_HPP
#define QECBENCH_DEM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qecbench/circuit.hpp"
#include "qecbench/codegen.hpp"

namespace qec {

// One elementary error: its probability and the detectors/observables it
// flips. Signatures are canonical (sorted, deduplicated).
struct ErrorMechanism {
    double p = 0;
    std::vector<uint32_t> detectors;
    std::vector<uint32_t> observables;

    bool operator==(const ErrorMechanism& o) const {
        return p == o.p && detectors == o.detectors && observables == o.observables;
    }
};

struct DetectorErrorModel {
    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;
    // Sorted by (detectors, observables); no two mechanisms share a
    // signature; probabilities in (0, 1].
    std::vector<ErrorMechanism> mechanisms;
};

// Propagates every constituent Pauli outcome of every noise opcode through
// the remaining circuit and records the flipped detectors and observables.
// DEPOLARIZE2 is decomposed into its 15 cases at p/15 before propagation;
// equal-signature mechanisms merge with p <- p1(1-p2) + p2(1-p1).
DetectorErrorModel extract_dem(const Circuit& noisy);

// Text form, one line per mechanism: "error(p) D3 D7 L0".
std::string dem_to_text(const DetectorErrorModel& dem);
DetectorErrorModel dem_from_text(const std::string& text);

struct SplitResult {
    DetectorErrorModel x_dem;  // mechanisms touching X-check detectors
    DetectorErrorModel z_dem;  // mechanisms touching Z-check detectors
    std::vector<std::string> diagnostics;
};

// Partitions mechanisms by the stabilizer class of the detectors they touch;
// mechanisms spanning both classes (Y-type components) contribute one piece
// to each half. Observable flips ride with `obs_half_is_x ? x : z`, the half
// whose check class detects observable-flipping errors.
SplitResult split_xz(const DetectorErrorModel& dem, const std::vector<bool>& detector_is_x,
                     bool obs_half_is_x);

// Classification from generated-circuit metadata; the observable half
// follows the memory basis.
SplitResult split_xz(const DetectorErrorModel& dem, const GeneratedCircuit& g);

}  // namespace qec

#endif
