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

#ifndef CLUSTERFORGE_TABLEAU_H
#define CLUSTERFORGE_TABLEAU_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "clusterforge/pauli_string.h"
#include "clusterforge/random.h"

namespace clusterforge {

struct MeasurementOutcome {
    int value = +1;  ///< +1 or -1.
    bool deterministic = false;

    friend bool operator==(const MeasurementOutcome &, const MeasurementOutcome &) = default;
};

/// Undirected simple graph over tableau qubit indices. Only `vertices` get generators.
struct Graph {
    std::vector<size_t> vertices;
    std::vector<std::pair<size_t, size_t>> edges;

    static Graph path(std::span<const size_t> order);
    static Graph grid(size_t rows, size_t cols, std::span<const size_t> row_major_qubits);
};

/// Stabilizer state of n qubits in the Aaronson-Gottesman destabilizer/stabilizer form.
///
/// Rows are stored interleaved (destabilizer k at row 2k, stabilizer k at row 2k+1)
/// so that appending a qubit only appends rows. Each row is a pair of word-packed
/// bit-vectors plus a sign bit.
class Tableau {
   public:
    /// |+>^n. Throws InvalidSize when n == 0.
    static Tableau plus_state(size_t n);
    /// |0>^n. Throws InvalidSize when n == 0.
    static Tableau zero_state(size_t n);

    size_t num_qubits() const {
        return n_;
    }

    /// Appends one qubit in |+> and returns its index.
    size_t add_qubit();

    void apply_h(size_t a);
    void apply_s(size_t a);
    void apply_x(size_t a);
    void apply_z(size_t a);
    void apply_cz(size_t a, size_t b);
    /// Applies a Pauli operator (its sign is an irrelevant global phase).
    void apply_pauli(const PauliString &p);

    MeasurementOutcome measure_z(size_t a, RandomStream &rng);
    /// H, Z measurement, H: leaves the qubit in the measured X eigenstate.
    MeasurementOutcome measure_x(size_t a, RandomStream &rng);
    /// The Z outcome when it is forced by the state, nullopt when it would be random.
    std::optional<int> peek_z(size_t a) const;

    /// True iff +P is an element of the stabilizer group.
    bool is_stabilized_by(const PauliString &p) const;

    PauliString stabilizer(size_t k) const;
    PauliString destabilizer(size_t k) const;

    /// Checks the symplectic relations between all rows and their rank.
    /// O(n^3); throws AuditFailure describing the first violation.
    void audit() const;

    friend bool operator==(const Tableau &a, const Tableau &b);

   private:
    explicit Tableau(size_t n);

    uint64_t *row_x(size_t r) {
        return xs_.data() + r * words_;
    }
    uint64_t *row_z(size_t r) {
        return zs_.data() + r * words_;
    }
    const uint64_t *row_x(size_t r) const {
        return xs_.data() + r * words_;
    }
    const uint64_t *row_z(size_t r) const {
        return zs_.data() + r * words_;
    }
    bool bit_x(size_t r, size_t q) const {
        return (row_x(r)[q >> 6] >> (q & 63)) & 1;
    }
    bool bit_z(size_t r, size_t q) const {
        return (row_z(r)[q >> 6] >> (q & 63)) & 1;
    }

    PauliString row(size_t r) const;
    void check_qubit(size_t a) const;
    void reserve_words(size_t words);
    /// row[dst] = row[src] * row[dst] (the CHP rowsum). Returns false when the
    /// product phase is imaginary, which only happens for destabilizer rows.
    bool rowsum(size_t dst, size_t src);

    size_t n_ = 0;
    size_t words_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    std::vector<uint8_t> signs_;
};

/// The cluster generator X_v * prod_{u in N(v)} Z_u on an n-qubit register.
PauliString cluster_generator(size_t n, const Graph &graph, size_t vertex);

/// True iff, after applying `corrections`, every cluster generator of `graph`
/// stabilizes the state with sign +1.
bool verify_cluster(const Tableau &t, const Graph &graph, const PauliString &corrections);

}  // namespace clusterforge

#endif
