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

#ifndef QECBENCH_PAULI_HPP
#define QECBENCH_PAULI_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qec {

// Phase-less Pauli. Y is the combined X and Z flip; no ±1/±i bookkeeping
// anywhere since frame propagation of Pauli noise never observes phases.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Z: return 'Z';
        case Pauli::Y: return 'Y';
    }
    return '?';
}

inline bool pauli_has_x(Pauli p) { return static_cast<uint8_t>(p) & 1u; }
inline bool pauli_has_z(Pauli p) { return static_cast<uint8_t>(p) & 2u; }

inline Pauli pauli_from_xz(bool x, bool z) {
    return static_cast<Pauli>((x ? 1u : 0u) | (z ? 2u : 0u));
}

// n-qubit Pauli operator stored as two bit masks (X flips, Z flips),
// 64 qubits per word. Composition is mask XOR; every string is its own
// inverse.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(size_t n) : n_(n), x_(words_for(n), 0), z_(words_for(n), 0) {}

    static PauliString single(size_t n, size_t qubit, Pauli p) {
        PauliString s(n);
        s.set(qubit, p);
        return s;
    }

    size_t num_qubits() const { return n_; }

    Pauli get(size_t q) const {
        check_index(q);
        return pauli_from_xz(bit(x_, q), bit(z_, q));
    }

    void set(size_t q, Pauli p) {
        check_index(q);
        assign_bit(x_, q, pauli_has_x(p));
        assign_bit(z_, q, pauli_has_z(p));
    }

    void flip_x(size_t q) {
        check_index(q);
        x_[q >> 6] ^= 1ull << (q & 63);
    }
    void flip_z(size_t q) {
        check_index(q);
        z_[q >> 6] ^= 1ull << (q & 63);
    }

    bool x_bit(size_t q) const { check_index(q); return bit(x_, q); }
    bool z_bit(size_t q) const { check_index(q); return bit(z_, q); }

    bool is_identity() const {
        for (uint64_t w : x_)
            if (w) return false;
        for (uint64_t w : z_)
            if (w) return false;
        return true;
    }

    size_t weight() const {
        size_t w = 0;
        for (size_t q = 0; q < n_; q++)
            if (get(q) != Pauli::I) w++;
        return w;
    }

    // In-place phase-less product.
    PauliString& operator*=(const PauliString& other) {
        if (other.n_ != n_) throw std::invalid_argument("PauliString size mismatch");
        for (size_t i = 0; i < x_.size(); i++) {
            x_[i] ^= other.x_[i];
            z_[i] ^= other.z_[i];
        }
        return *this;
    }

    bool operator==(const PauliString& other) const {
        return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
    }
    bool operator!=(const PauliString& other) const { return !(*this == other); }

    std::string str() const {
        std::string s;
        s.reserve(n_);
        for (size_t q = 0; q < n_; q++) s.push_back(pauli_char(get(q)));
        return s;
    }

  private:
    static size_t words_for(size_t n) { return (n + 63) / 64; }
    static bool bit(const std::vector<uint64_t>& v, size_t q) {
        return (v[q >> 6] >> (q & 63)) & 1u;
    }
    static void assign_bit(std::vector<uint64_t>& v, size_t q, bool val) {
        uint64_t mask = 1ull << (q & 63);
        if (val)
            v[q >> 6] |= mask;
        else
            v[q >> 6] &= ~mask;
    }
    void check_index(size_t q) const {
        if (q >= n_) throw std::out_of_range("qubit index out of range");
    }

    size_t n_ = 0;
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
};

// Phase-less product a∘b: x = a.x ^ b.x, z = a.z ^ b.z.
inline PauliString compose(const PauliString& a, const PauliString& b) {
    PauliString r = a;
    r *= b;
    return r;
}

}  // namespace qec

#endif
