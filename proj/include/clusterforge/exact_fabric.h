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


#ifndef CLUSTERFORGE_EXACT_FABRIC_H
#define CLUSTERFORGE_EXACT_FABRIC_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clusterforge/fabric.h"
#include "clusterforge/pauli_string.h"
#include "clusterforge/tableau.h"

namespace clusterforge {

/// Backend that runs every operation on a stabilizer tableau.
///
/// Besides the tableau it keeps the graph the protocol believes it has built and a
/// Pauli frame, such that applying the frame to the tableau state gives exactly the
/// graph state of that graph. Measurement outcomes are folded into the frame with
/// the usual graph-state rules. Measured qubits are reset to |+> and their tableau
/// slot is reused, so the tableau only grows to the peak number of live qubits.
class ExactFabric : public FabricCore {
   public:
    /// Never reused within one fabric.
    using Qubit = uint64_t;

    static constexpr size_t kDefaultCap = 4096;

    /// Qubits in path order. A destroyed end stays listed until repaired away.
    struct Chain {
        std::deque<Qubit> qubits;
        bool front_destroyed = false;
        bool back_destroyed = false;
    };

    /// legs[d] lists qubits from the center outward.
    struct Plus {
        Qubit center = 0;
        std::array<std::deque<Qubit>, 4> legs;
        std::array<bool, 4> end_destroyed{};
    };

    /// `cap` bounds the number of simultaneously live qubits; exceeding it throws CapExceeded.
    explicit ExactFabric(const ProtocolParams &params, size_t cap = kDefaultCap);

    Chain fresh_chain();
    Chain provision_chain(size_t n);
    size_t length(const Chain &c) const {
        return c.qubits.size();
    }
    bool cpf_join(Chain &a, Chain &b);
    bool repair_end(Chain &c, End end);
    void discard(Chain &c);
    void trim(Chain &c, size_t n);

    std::optional<Plus> plus_join(Chain &a, Chain &b);
    Plus provision_plus(size_t n_l);
    size_t leg_length(const Plus &s, Direction d) const {
        return s.legs[static_cast<size_t>(d)].size();
    }
    bool cpf_legs(Plus &a, Direction da, Plus &b, Direction db);
    size_t repair_leg(Plus &s, Direction d);
    void fuse_legs(Plus &a, Direction da, Plus &b, Direction db);
    void detach_leg(Plus &s, Direction d);

    /// X-measures an interior path qubit. Fusions come in adjacent pairs: for a path
    /// a-b-c-d, fuse_interior(b) then fuse_interior(c) leaves the edge a-d. A single
    /// X measurement on a path cannot be undone by Pauli corrections, so the first
    /// call only measures and the graph update happens on the second.
    void fuse_interior(Qubit q);

    bool alive(Qubit q) const {
        return slot_of_.contains(q);
    }
    std::vector<Qubit> neighbors(Qubit q) const;

    /// True iff, after the frame, the state is exactly the graph state on `vertices`
    /// with `edges` (and those vertices are not entangled with anything else).
    bool verify(std::span<const Qubit> vertices, std::span<const std::pair<Qubit, Qubit>> edges) const;
    /// Checks the stored graph of every live qubit, and that free slots hold |+>.
    bool verify_bookkeeping() const;

    void describe(const Chain &c, Topology &out) const;
    void describe(std::span<const Plus> nodes, Topology &out) const;

    const Tableau &tableau() const {
        return tableau_;
    }
    PauliString frame() const;
    size_t cap() const {
        return cap_;
    }

   private:
    struct Slot {
        Qubit id = 0;
        bool alive = false;
        bool fx = false;
        bool fz = false;
        std::vector<size_t> nbrs;
    };

    struct PendingFusion {
        size_t slot;
        int outcome;  ///< Relative to the frame.
        int raw;      ///< As returned by the tableau.
    };

    size_t slot(Qubit q) const;
    Qubit allocate();
    void require_idle() const;
    bool adjacent(size_t a, size_t b) const;
    void toggle_edge(size_t a, size_t b);
    void unlink(size_t s);
    void apply_cz(size_t a, size_t b);
    bool gate(size_t a, size_t b);
    /// Z measurement with the graph rule; frees the slot. Returns the outcome relative to the frame.
    int measure_z(size_t s);
    /// Z measurement without frame updates, for qubits whose whole component is thrown away.
    void release(size_t s);
    void free_slot(size_t s);
    size_t walk(size_t prev, size_t start) const;

    size_t cap_;
    Tableau tableau_;
    RandomStream outcome_rng_;
    std::vector<Slot> slots_;
    std::vector<size_t> free_;
    std::unordered_map<Qubit, size_t> slot_of_;
    Qubit next_id_ = 0;
    std::optional<PendingFusion> pending_;
};

}  // namespace clusterforge

#endif
