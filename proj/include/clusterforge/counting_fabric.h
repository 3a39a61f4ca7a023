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


#ifndef CLUSTERFORGE_COUNTING_FABRIC_H
#define CLUSTERFORGE_COUNTING_FABRIC_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "clusterforge/fabric.h"

namespace clusterforge {

/// Backend that tracks only shapes and resource counts. No quantum state is stored;
/// its structural rules are checked against ExactFabric at small sizes.
class CountingFabric : public FabricCore {
   public:
    /// A path of `length` qubits. A destroyed end qubit is still counted in `length`
    /// until it is repaired away.
    struct Chain {
        size_t length = 0;
        bool front_destroyed = false;
        bool back_destroyed = false;
    };

    /// A center qubit with four legs; legs[d] counts qubits from the center outward.
    struct Plus {
        uint64_t center = 0;
        std::array<size_t, 4> legs{};
        std::array<bool, 4> end_destroyed{};
    };

    explicit CountingFabric(const ProtocolParams &params) : FabricCore(params) {
    }

    Chain fresh_chain();
    /// A ready-made chain that costs no attempts and no time.
    Chain provision_chain(size_t n);
    size_t length(const Chain &c) const {
        return c.length;
    }

    /// Gate between a's back end and b's front end. On success b is appended to a and
    /// left empty; on failure both end qubits are destroyed.
    bool cpf_join(Chain &a, Chain &b);
    /// Removes a destroyed end and its neighbor. Returns false, leaving the chain
    /// untouched, when fewer than three qubits remain.
    bool repair_end(Chain &c, End end);
    void discard(Chain &c);
    /// Keeps the first n qubits.
    void trim(Chain &c, size_t n);

    /// Fig. 2A construction on two equal odd-length chains. Both chains are consumed
    /// either way; on failure everything is discarded.
    std::optional<Plus> plus_join(Chain &a, Chain &b);
    Plus provision_plus(size_t n_l);

    size_t leg_length(const Plus &s, Direction d) const {
        return s.legs[static_cast<size_t>(d)];
    }
    /// Gate between the outermost qubits of two legs.
    bool cpf_legs(Plus &a, Direction da, Plus &b, Direction db);
    /// Removes a destroyed leg end and its neighbor, or only the end when it touches
    /// the center. Returns the remaining leg length.
    size_t repair_leg(Plus &s, Direction d);
    /// After a successful cpf_legs, X-measures every leg qubit between the two centers.
    void fuse_legs(Plus &a, Direction da, Plus &b, Direction db);
    /// Z-measures the leg qubit next to the center and discards the rest of the leg.
    void detach_leg(Plus &s, Direction d);

    void describe(const Chain &c, Topology &out) const;
    void describe(std::span<const Plus> nodes, Topology &out) const;

   private:
    void allocate(size_t n);
    void destroy(size_t n);

    uint64_t next_center_ = 0;
    std::vector<std::pair<uint64_t, uint64_t>> bonds_;
};

}  // namespace clusterforge

#endif
