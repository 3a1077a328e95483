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

#ifndef QECBENCH_RNG_HPP
#define QECBENCH_RNG_HPP

#include <array>
#include <cstdint>

namespace qec {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A block is a pure function of (key, counter), so any consumer that owns a
// distinct counter range owns an independent stream. Shot-level substreams
// use counter_hi = shot index; all draws inside a shot advance counter_lo.
struct Philox4x32 {
    static constexpr uint32_t kM0 = 0xD2511F53u;
    static constexpr uint32_t kM1 = 0xCD9E8D57u;
    static constexpr uint32_t kW0 = 0x9E3779B9u;
    static constexpr uint32_t kW1 = 0xBB67AE85u;

    static std::array<uint32_t, 4> block(uint64_t key, uint64_t counter_hi, uint64_t counter_lo) {
        uint32_t c0 = static_cast<uint32_t>(counter_lo);
        uint32_t c1 = static_cast<uint32_t>(counter_lo >> 32);
        uint32_t c2 = static_cast<uint32_t>(counter_hi);
        uint32_t c3 = static_cast<uint32_t>(counter_hi >> 32);
        uint32_t k0 = static_cast<uint32_t>(key);
        uint32_t k1 = static_cast<uint32_t>(key >> 32);
        for (int round = 0; round < 10; round++) {
            uint64_t p0 = static_cast<uint64_t>(kM0) * c0;
            uint64_t p1 = static_cast<uint64_t>(kM1) * c2;
            uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
            uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
            uint32_t n0 = hi1 ^ c1 ^ k0;
            uint32_t n1 = lo1;
            uint32_t n2 = hi0 ^ c3 ^ k1;
            uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += kW0;
            k1 += kW1;
        }
        return {c0, c1, c2, c3};
    }
};

// One substream: draws are indexed by an internal 64-bit counter, so the
// stream is a deterministic function of (key, stream_id) alone. Copyable.
class CounterRng {
  public:
    CounterRng(uint64_t key, uint64_t stream_id) : key_(key), stream_(stream_id) {}

    uint32_t next_u32() {
        if (avail_ == 0) {
            buf_ = Philox4x32::block(key_, stream_, counter_++);
            avail_ = 4;
        }
        return buf_[--avail_];
    }

    uint64_t next_u64() {
        uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double next_double_nz() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Uniform in [0, n), unbiased (rejection on the top range).
    uint64_t next_below(uint64_t n) {
        uint64_t threshold = -n % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    bool next_bernoulli(double p) { return next_double() < p; }

  private:
    uint64_t key_;
    uint64_t stream_;
    uint64_t counter_ = 0;
    std::array<uint32_t, 4> buf_{};
    int avail_ = 0;
};

// Stateless mixing helper for deriving child seeds (cell seeds, bootstrap
// streams, ...) from a master seed plus a couple of indices.
inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
    auto blk = Philox4x32::block(seed, a, b);
    return (static_cast<uint64_t>(blk[0]) << 32) | blk[1];
}

}  // namespace qec

#endif
