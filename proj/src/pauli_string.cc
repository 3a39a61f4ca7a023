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

#include "clusterforge/pauli_string.h"

#include <stdexcept>

#include "clusterforge/errors.h"

namespace clusterforge {

PauliString::PauliString(size_t n) : n_(n), xs_(words_for_bits(n), 0), zs_(words_for_bits(n), 0) {
}

PauliString PauliString::from_text(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    PauliString result(text.size());
    result.negative_ = negative;
    for (size_t q = 0; q < text.size(); q++) {
        result.set(q, text[q] == '_' ? 'I' : text[q]);
    }
    return result;
}

void PauliString::set_x(size_t q, bool v) {
    uint64_t mask = uint64_t{1} << (q & 63);
    xs_[q >> 6] = v ? (xs_[q >> 6] | mask) : (xs_[q >> 6] & ~mask);
}

void PauliString::set_z(size_t q, bool v) {
    uint64_t mask = uint64_t{1} << (q & 63);
    zs_[q >> 6] = v ? (zs_[q >> 6] | mask) : (zs_[q >> 6] & ~mask);
}

void PauliString::set(size_t q, char pauli) {
    if (q >= n_) {
        throw InvalidQubit("Pauli index " + std::to_string(q) + " out of range.");
    }
    switch (pauli) {
        case 'I':
            set_x(q, false);
            set_z(q, false);
            break;
        case 'X':
            set_x(q, true);
            set_z(q, false);
            break;
        case 'Y':
            set_x(q, true);
            set_z(q, true);
            break;
        case 'Z':
            set_x(q, false);
            set_z(q, true);
            break;
        default:
            throw std::invalid_argument(std::string("Not a Pauli: '") + pauli + "'.");
    }
}

char PauliString::pauli(size_t q) const {
    static constexpr char kNames[4] = {'I', 'X', 'Z', 'Y'};
    return kNames[x(q) | (z(q) << 1)];
}

bool PauliString::is_identity() const {
    for (size_t k = 0; k < xs_.size(); k++) {
        if (xs_[k] | zs_[k]) {
            return false;
        }
    }
    return true;
}

bool PauliString::commutes(const PauliString &other) const {
    if (other.n_ != n_) {
        throw LengthMismatch("Pauli strings of different lengths.");
    }
    return !words_anticommute(xs_, zs_, other.xs_, other.zs_);
}

size_t PauliString::weight() const {
    size_t w = 0;
    for (size_t k = 0; k < xs_.size(); k++) {
        w += std::popcount(xs_[k] | zs_[k]);
    }
    return w;
}

PauliString &PauliString::operator*=(const PauliString &rhs) {
    if (rhs.n_ != n_) {
        throw LengthMismatch("Pauli strings of different lengths.");
    }
    uint8_t log_i = inplace_right_mul_log_i(xs_, zs_, rhs.xs_, rhs.zs_);
    log_i = static_cast<uint8_t>((log_i + 2 * negative_ + 2 * rhs.negative_) & 3);
    if (log_i & 1) {
        throw std::domain_error("Product of anticommuting Pauli strings is not Hermitian.");
    }
    negative_ = log_i == 2;
    return *this;
}

std::string PauliString::str() const {
    std::string out;
    out.reserve(n_ + 1);
    out.push_back(negative_ ? '-' : '+');
    for (size_t q = 0; q < n_; q++) {
        char c = pauli(q);
        out.push_back(c == 'I' ? '_' : c);
    }
    return out;
}

}  // namespace clusterforge
