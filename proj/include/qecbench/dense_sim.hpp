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

#ifndef QECBENCH_DENSE_SIM_HPP
#define QECBENCH_DENSE_SIM_HPP

#include "qecbench/sim.hpp"

namespace qec {

// Brute-force state-vector cross-check for the frame sampler. Runs every
// shot through a full 2^n amplitude simulation with Born-rule measurements
// and explicitly sampled Pauli channels. Capacity-limited to 12 qubits.
//
// Only used for validation: same output shape and detector/observable
// semantics as sample_batch, deliberately sharing none of its execution
// machinery.
ShotBatch dense_oracle_sample(const Circuit& c, uint64_t shots, uint64_t seed);

constexpr uint32_t kDenseOracleMaxQubits = 12;

}  // namespace qec

#endif
