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


// Pieces shared by the two backends. Protocols are templates over a backend type and
// only use the operations both backends provide; see counting_fabric.h and exact_fabric.h.

#ifndef CLUSTERFORGE_FABRIC_H
#define CLUSTERFORGE_FABRIC_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "clusterforge/ledger.h"
#include "clusterforge/random.h"

namespace clusterforge {

enum class End { kFront, kBack };

/// Leg of a "+" shape. Opposite legs come from the same source chain.
enum class Direction : uint8_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

inline constexpr std::array<Direction, 4> kDirections = {
    Direction::kNorth, Direction::kEast, Direction::kSouth, Direction::kWest};

constexpr Direction opposite(Direction d) {
    return static_cast<Direction>((static_cast<uint8_t>(d) + 2) & 3);
}

/// Backend-neutral structural summary of a set of built objects, used to compare backends.
struct Topology {
    /// Marks a component that is not the shape its handle claims.
    static constexpr size_t kMalformed = std::numeric_limits<size_t>::max();

    std::vector<size_t> segments;
    std::vector<std::array<size_t, 4>> nodes;
    /// Bonds between nodes, as (lower index, higher index) in the order the nodes were listed.
    std::vector<std::pair<size_t, size_t>> bonds;
    uint64_t live_qubits = 0;

    friend bool operator==(const Topology &, const Topology &) = default;
};

/// State common to both backends: parameters, the gate stream and the ledger.
///
/// The gate stream is keyed by the seed alone, so two backends given the same
/// parameters see the same sequence of gate successes and failures.
class FabricCore {
   public:
    explicit FabricCore(const ProtocolParams &params);

    const ProtocolParams &params() const {
        return params_;
    }
    ResourceLedger &ledger() {
        return ledger_;
    }
    const ResourceLedger &ledger() const {
        return ledger_;
    }
    uint64_t live_qubits() const {
        return live_;
    }

    void charge_time(std::span<const double> child_times) {
        clusterforge::charge_time(ledger_, params_.time_model, child_times);
    }

    /// Qubit conservation and counter sanity. Throws AuditFailure.
    void audit() const {
        ledger_.audit(live_);
    }

   protected:
    /// One gate attempt: costs one time unit and draws from the gate stream.
    bool attempt_gate();

    ProtocolParams params_;
    BernoulliGate gate_;
    RandomStream gate_rng_;
    ResourceLedger ledger_;
    uint64_t live_ = 0;
};

}  // namespace clusterforge

#endif
