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

#include "clusterforge/tableau.h"

#include <algorithm>
#include <string>

#include "clusterforge/errors.h"

namespace clusterforge {

namespace {

inline size_t destab_row(size_t k) {
    return 2 * k;
}
inline size_t stab_row(size_t k) {
    return 2 * k + 1;
}

}  // namespace

Graph Graph::path(std::span<const size_t> order) {
    Graph g;
    g.vertices.assign(order.begin(), order.end());
    for (size_t k = 1; k < order.size(); k++) {
        g.edges.emplace_back(order[k - 1], order[k]);
    }
    return g;
}

Graph Graph::grid(size_t rows, size_t cols, std::span<const size_t> row_major_qubits) {
    if (row_major_qubits.size() != rows * cols) {
        throw LengthMismatch("Grid qubit list does not match its dimensions.");
    }
    Graph g;
    g.vertices.assign(row_major_qubits.begin(), row_major_qubits.end());
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            size_t here = row_major_qubits[r * cols + c];
            if (c + 1 < cols) {
                g.edges.emplace_back(here, row_major_qubits[r * cols + c + 1]);
            }
            if (r + 1 < rows) {
                g.edges.emplace_back(here, row_major_qubits[(r + 1) * cols + c]);
            }
        }
    }
    return g;
}

Tableau::Tableau(size_t n)
    : n_(n),
      words_(words_for_bits(std::max<size_t>(n, 1))),
      xs_(2 * n * words_, 0),
      zs_(2 * n * words_, 0),
      signs_(2 * n, 0) {
}

Tableau Tableau::plus_state(size_t n) {
    if (n == 0) {
        throw InvalidSize("A tableau needs at least one qubit.");
    }
    Tableau t(n);
    for (size_t k = 0; k < n; k++) {
        t.row_z(destab_row(k))[k >> 6] |= uint64_t{1} << (k & 63);
        t.row_x(stab_row(k))[k >> 6] |= uint64_t{1} << (k & 63);
    }
    return t;
}

Tableau Tableau::zero_state(size_t n) {
    if (n == 0) {
        throw InvalidSize("A tableau needs at least one qubit.");
    }
    Tableau t(n);
    for (size_t k = 0; k < n; k++) {
        t.row_x(destab_row(k))[k >> 6] |= uint64_t{1} << (k & 63);
        t.row_z(stab_row(k))[k >> 6] |= uint64_t{1} << (k & 63);
    }
    return t;
}

void Tableau::reserve_words(size_t words) {
    if (words <= words_) {
        return;
    }
    size_t rows = 2 * n_;
    std::vector<uint64_t> xs(rows * words, 0);
    std::vector<uint64_t> zs(rows * words, 0);
    for (size_t r = 0; r < rows; r++) {
        std::copy_n(row_x(r), words_, xs.data() + r * words);
        std::copy_n(row_z(r), words_, zs.data() + r * words);
    }
    xs_ = std::move(xs);
    zs_ = std::move(zs);
    words_ = words;
}

size_t Tableau::add_qubit() {
    size_t q = n_;
    if (q + 1 > 64 * words_) {
        reserve_words(2 * words_);
    }
    n_ += 1;
    xs_.resize(2 * n_ * words_, 0);
    zs_.resize(2 * n_ * words_, 0);
    signs_.resize(2 * n_, 0);
    row_z(destab_row(q))[q >> 6] |= uint64_t{1} << (q & 63);
    row_x(stab_row(q))[q >> 6] |= uint64_t{1} << (q & 63);
    return q;
}

void Tableau::check_qubit(size_t a) const {
    if (a >= n_) {
        throw InvalidQubit("Qubit " + std::to_string(a) + " out of range for " + std::to_string(n_) + " qubits.");
    }
}

void Tableau::apply_h(size_t a) {
    check_qubit(a);
    size_t w = a >> 6;
    uint64_t m = uint64_t{1} << (a & 63);
    for (size_t r = 0; r < 2 * n_; r++) {
        uint64_t &x = row_x(r)[w];
        uint64_t &z = row_z(r)[w];
        bool xb = x & m;
        bool zb = z & m;
        signs_[r] ^= xb & zb;
        if (xb != zb) {
            x ^= m;
            z ^= m;
        }
    }
}

void Tableau::apply_s(size_t a) {
    check_qubit(a);
    size_t w = a >> 6;
    uint64_t m = uint64_t{1} << (a & 63);
    for (size_t r = 0; r < 2 * n_; r++) {
        uint64_t x = row_x(r)[w] & m;
        uint64_t &z = row_z(r)[w];
        signs_[r] ^= (x && (z & m));
        z ^= x;
    }
}

void Tableau::apply_x(size_t a) {
    check_qubit(a);
    for (size_t r = 0; r < 2 * n_; r++) {
        signs_[r] ^= bit_z(r, a);
    }
}

void Tableau::apply_z(size_t a) {
    check_qubit(a);
    for (size_t r = 0; r < 2 * n_; r++) {
        signs_[r] ^= bit_x(r, a);
    }
}

void Tableau::apply_cz(size_t a, size_t b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) {
        throw InvalidQubit("CZ needs two distinct qubits.");
    }
    size_t wa = a >> 6;
    size_t wb = b >> 6;
    uint64_t ma = uint64_t{1} << (a & 63);
    uint64_t mb = uint64_t{1} << (b & 63);
    for (size_t r = 0; r < 2 * n_; r++) {
        uint64_t *x = row_x(r);
        uint64_t *z = row_z(r);
        bool xa = x[wa] & ma;
        bool xb = x[wb] & mb;
        bool za = z[wa] & ma;
        bool zb = z[wb] & mb;
        signs_[r] ^= xa & xb & (za ^ zb);
        if (xb) {
            z[wa] ^= ma;
        }
        if (xa) {
            z[wb] ^= mb;
        }
    }
}

void Tableau::apply_pauli(const PauliString &p) {
    if (p.size() != n_) {
        throw LengthMismatch("Pauli length " + std::to_string(p.size()) + " != " + std::to_string(n_) + " qubits.");
    }
    size_t used = words_for_bits(n_);
    for (size_t r = 0; r < 2 * n_; r++) {
        signs_[r] ^= words_anticommute(
            {row_x(r), used}, {row_z(r), used}, p.x_words().first(used), p.z_words().first(used));
    }
}

bool Tableau::rowsum(size_t dst, size_t src) {
    size_t used = words_for_bits(n_);
    uint8_t log_i = inplace_right_mul_log_i({row_x(dst), used}, {row_z(dst), used}, {row_x(src), used},
                                            {row_z(src), used});
    log_i = static_cast<uint8_t>((log_i + 2 * signs_[dst] + 2 * signs_[src]) & 3);
    signs_[dst] = log_i >> 1;
    return (log_i & 1) == 0;
}

MeasurementOutcome Tableau::measure_z(size_t a, RandomStream &rng) {
    check_qubit(a);
    size_t pivot = n_;
    for (size_t k = 0; k < n_; k++) {
        if (bit_x(stab_row(k), a)) {
            pivot = k;
            break;
        }
    }
    if (pivot == n_) {
        return {*peek_z(a), true};
    }

    size_t p = stab_row(pivot);
    for (size_t r = 0; r < 2 * n_; r++) {
        if (r != p && r != destab_row(pivot) && bit_x(r, a)) {
            rowsum(r, p);
        }
    }
    size_t used = words_for_bits(n_);
    size_t d = destab_row(pivot);
    std::copy_n(row_x(p), used, row_x(d));
    std::copy_n(row_z(p), used, row_z(d));
    signs_[d] = signs_[p];
    std::fill_n(row_x(p), used, 0);
    std::fill_n(row_z(p), used, 0);
    row_z(p)[a >> 6] |= uint64_t{1} << (a & 63);
    bool flip = rng.coin();
    signs_[p] = flip;
    return {flip ? -1 : +1, false};
}

MeasurementOutcome Tableau::measure_x(size_t a, RandomStream &rng) {
    apply_h(a);
    MeasurementOutcome m = measure_z(a, rng);
    apply_h(a);
    return m;
}

std::optional<int> Tableau::peek_z(size_t a) const {
    check_qubit(a);
    for (size_t k = 0; k < n_; k++) {
        if (bit_x(stab_row(k), a)) {
            return std::nullopt;
        }
    }
    // Z_a is (up to sign) the product of the stabilizers whose destabilizers anticommute with it.
    PauliString acc(n_);
    size_t used = words_for_bits(n_);
    uint8_t log_i = 0;
    for (size_t k = 0; k < n_; k++) {
        if (bit_x(destab_row(k), a)) {
            size_t s = stab_row(k);
            log_i += inplace_right_mul_log_i(acc.x_words(), acc.z_words(), {row_x(s), used}, {row_z(s), used});
            log_i += 2 * signs_[s];
        }
    }
    return (log_i & 3) == 2 ? -1 : +1;
}

bool Tableau::is_stabilized_by(const PauliString &p) const {
    if (p.size() != n_) {
        throw LengthMismatch("Pauli length " + std::to_string(p.size()) + " != " + std::to_string(n_) + " qubits.");
    }
    size_t used = words_for_bits(n_);
    auto px = p.x_words().first(used);
    auto pz = p.z_words().first(used);
    PauliString acc(n_);
    uint8_t log_i = 0;
    for (size_t k = 0; k < n_; k++) {
        size_t s = stab_row(k);
        if (words_anticommute({row_x(s), used}, {row_z(s), used}, px, pz)) {
            return false;
        }
        size_t d = destab_row(k);
        if (words_anticommute({row_x(d), used}, {row_z(d), used}, px, pz)) {
            log_i += inplace_right_mul_log_i(acc.x_words(), acc.z_words(), {row_x(s), used}, {row_z(s), used});
            log_i += 2 * signs_[s];
        }
    }
    acc.set_negative((log_i & 3) == 2);
    return acc == p;
}

PauliString Tableau::row(size_t r) const {
    PauliString out(n_);
    size_t used = words_for_bits(n_);
    std::copy_n(row_x(r), used, out.x_words().begin());
    std::copy_n(row_z(r), used, out.z_words().begin());
    out.set_negative(signs_[r]);
    return out;
}

PauliString Tableau::stabilizer(size_t k) const {
    check_qubit(k);
    return row(stab_row(k));
}

PauliString Tableau::destabilizer(size_t k) const {
    check_qubit(k);
    return row(destab_row(k));
}

void Tableau::audit() const {
    size_t used = words_for_bits(n_);
    auto anticommute = [&](size_t r1, size_t r2) {
        return words_anticommute({row_x(r1), used}, {row_z(r1), used}, {row_x(r2), used}, {row_z(r2), used});
    };
    for (size_t i = 0; i < n_; i++) {
        for (size_t j = 0; j < n_; j++) {
            if (anticommute(stab_row(i), stab_row(j))) {
                throw AuditFailure("Stabilizers " + std::to_string(i) + " and " + std::to_string(j) + " anticommute.");
            }
            if (anticommute(destab_row(i), destab_row(j))) {
                throw AuditFailure(
                    "Destabilizers " + std::to_string(i) + " and " + std::to_string(j) + " anticommute.");
            }
            if (anticommute(destab_row(i), stab_row(j)) != (i == j)) {
                throw AuditFailure(
                    "Destabilizer " + std::to_string(i) + " vs stabilizer " + std::to_string(j) +
                    " has the wrong commutation relation.");
            }
        }
    }

    // Rank over GF(2) of the 2n x 2n bit matrix [x | z].
    size_t rows = 2 * n_;
    std::vector<std::vector<uint64_t>> m(rows, std::vector<uint64_t>(2 * used, 0));
    for (size_t r = 0; r < rows; r++) {
        std::copy_n(row_x(r), used, m[r].begin());
        std::copy_n(row_z(r), used, m[r].begin() + used);
    }
    size_t rank = 0;
    for (size_t col = 0; col < 2 * n_ && rank < rows; col++) {
        size_t w = col < n_ ? (col >> 6) : used + ((col - n_) >> 6);
        uint64_t bit = uint64_t{1} << ((col < n_ ? col : col - n_) & 63);
        size_t pivot = rank;
        while (pivot < rows && !(m[pivot][w] & bit)) {
            pivot++;
        }
        if (pivot == rows) {
            continue;
        }
        std::swap(m[pivot], m[rank]);
        for (size_t r = 0; r < rows; r++) {
            if (r != rank && (m[r][w] & bit)) {
                for (size_t k = 0; k < 2 * used; k++) {
                    m[r][k] ^= m[rank][k];
                }
            }
        }
        rank++;
    }
    if (rank != rows) {
        throw AuditFailure("Tableau rows are linearly dependent (rank " + std::to_string(rank) + ").");
    }
}

bool operator==(const Tableau &a, const Tableau &b) {
    if (a.n_ != b.n_ || a.signs_ != b.signs_) {
        return false;
    }
    size_t used = words_for_bits(a.n_);
    for (size_t r = 0; r < 2 * a.n_; r++) {
        if (!std::equal(a.row_x(r), a.row_x(r) + used, b.row_x(r)) ||
            !std::equal(a.row_z(r), a.row_z(r) + used, b.row_z(r))) {
            return false;
        }
    }
    return true;
}

PauliString cluster_generator(size_t n, const Graph &graph, size_t vertex) {
    PauliString g(n);
    if (vertex >= n) {
        throw InvalidQubit("Graph vertex " + std::to_string(vertex) + " out of range.");
    }
    g.set_x(vertex, true);
    for (const auto &[u, v] : graph.edges) {
        if (u >= n || v >= n) {
            throw InvalidQubit("Graph edge references qubit out of range.");
        }
        if (u == vertex) {
            g.set_z(v, !g.z(v));
        } else if (v == vertex) {
            g.set_z(u, !g.z(u));
        }
    }
    return g;
}

bool verify_cluster(const Tableau &t, const Graph &graph, const PauliString &corrections) {
    size_t n = t.num_qubits();
    if (corrections.size() != n) {
        throw LengthMismatch("Correction frame does not cover the tableau.");
    }
    for (size_t v : graph.vertices) {
        if (v >= n) {
            throw InvalidQubit("Graph vertex " + std::to_string(v) + " out of range.");
        }
    }
    for (size_t v : graph.vertices) {
        PauliString g = cluster_generator(n, graph, v);
        // C|psi> is stabilized by g iff |psi> is stabilized by C g C = +-g.
        g.set_negative(!g.commutes(corrections));
        if (!t.is_stabilized_by(g)) {
            return false;
        }
    }
    return true;
}

}  // namespace clusterforge
