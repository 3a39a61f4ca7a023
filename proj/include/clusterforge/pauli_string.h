// Copyright 2026 The clusterforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLUSTERFORGE_PAULI_STRING_H
#define CLUSTERFORGE_PAULI_STRING_H

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clusterforge {

inline constexpr size_t words_for_bits(size_t n) {
    return (n + 63) / 64;
}

/// Overwrites (x1, z1) with the Pauli product (x1, z1) * (x2, z2) and returns
/// the power of i (mod 4) produced by the product, ignoring both sign bits.
///
/// The bit pair (x, z) = (1, 1) denotes Y. All four spans must have equal length.
inline uint8_t inplace_right_mul_log_i(
    std::span<uint64_t> x1, std::span<uint64_t> z1, std::span<const uint64_t> x2, std::span<const uint64_t> z2) {
    // Two-bit counters, one per qubit position, accumulating +1 / -1 powers of i.
    uint64_t cnt1 = 0;
    uint64_t cnt2 = 0;
    for (size_t k = 0; k < x1.size(); k++) {
        uint64_t old_x1 = x1[k];
        uint64_t old_z1 = z1[k];
        x1[k] ^= x2[k];
        z1[k] ^= z2[k];
        uint64_t x1z2 = old_x1 & z2[k];
        uint64_t anti_commutes = (x2[k] & old_z1) ^ x1z2;
        cnt2 ^= (cnt1 ^ x1[k] ^ z1[k] ^ x1z2) & anti_commutes;
        cnt1 ^= anti_commutes;
    }
    return static_cast<uint8_t>((std::popcount(cnt1) + 2 * std::popcount(cnt2)) & 3);
}

/// True when the two Paulis anticommute (odd symplectic product).
inline bool words_anticommute(
    std::span<const uint64_t> x1, std::span<const uint64_t> z1, std::span<const uint64_t> x2,
    std::span<const uint64_t> z2) {
    uint64_t acc = 0;
    for (size_t k = 0; k < x1.size(); k++) {
        acc ^= (x1[k] & z2[k]) ^ (z1[k] & x2[k]);
    }
    return (std::popcount(acc) & 1) != 0;
}

/// A Hermitian Pauli operator on n qubits with a real sign.
class PauliString {
   public:
    PauliString() = default;

    /// The identity on n qubits with sign +1.
    explicit PauliString(size_t n);

    /// Parses text such as "+XZ_Y", "-XIZ" or "ZZ". '_' and 'I' both mean identity.
    static PauliString from_text(std::string_view text);

    size_t size() const {
        return n_;
    }

    bool x(size_t q) const {
        return (xs_[q >> 6] >> (q & 63)) & 1;
    }
    bool z(size_t q) const {
        return (zs_[q >> 6] >> (q & 63)) & 1;
    }
    void set_x(size_t q, bool v);
    void set_z(size_t q, bool v);

    /// Sets the Pauli acting on q to one of 'I', 'X', 'Y', 'Z'.
    void set(size_t q, char pauli);
    char pauli(size_t q) const;

    bool negative() const {
        return negative_;
    }
    void set_negative(bool v) {
        negative_ = v;
    }
    int sign() const {
        return negative_ ? -1 : +1;
    }

    bool is_identity() const;
    bool commutes(const PauliString &other) const;
    size_t weight() const;

    /// this = this * rhs. Throws when the product picks up an imaginary phase.
    PauliString &operator*=(const PauliString &rhs);

    std::span<uint64_t> x_words() {
        return xs_;
    }
    std::span<uint64_t> z_words() {
        return zs_;
    }
    std::span<const uint64_t> x_words() const {
        return xs_;
    }
    std::span<const uint64_t> z_words() const {
        return zs_;
    }

    std::string str() const;

    friend bool operator==(const PauliString &, const PauliString &) = default;

   private:
    size_t n_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    bool negative_ = false;
};

}  // namespace clusterforge

#endif
