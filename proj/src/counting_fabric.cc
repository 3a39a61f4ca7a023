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


#include "clusterforge/counting_fabric.h"

#include <algorithm>
#include <string>

#include "clusterforge/errors.h"

namespace clusterforge {

namespace {

size_t alive_in(const CountingFabric::Chain &c) {
    if (c.length == 0) {
        return 0;
    }
    if (c.length == 1) {
        return (c.front_destroyed || c.back_destroyed) ? 0 : 1;
    }
    return c.length - c.front_destroyed - c.back_destroyed;
}

size_t index(Direction d) {
    return static_cast<size_t>(d);
}

}  // namespace

void CountingFabric::allocate(size_t n) {
    ledger_.qubits_allocated += n;
    live_ += n;
}

void CountingFabric::destroy(size_t n) {
    ledger_.qubits_destroyed += n;
    live_ -= n;
}

CountingFabric::Chain CountingFabric::fresh_chain() {
    allocate(1);
    return Chain{1};
}

CountingFabric::Chain CountingFabric::provision_chain(size_t n) {
    if (n == 0) {
        throw InvalidSize("Cannot provision an empty chain.");
    }
    allocate(n);
    return Chain{n};
}

bool CountingFabric::cpf_join(Chain &a, Chain &b) {
    if (alive_in(a) == 0 || alive_in(b) == 0 || a.back_destroyed || b.front_destroyed) {
        throw ProtocolLogicError("cpf_join on an empty chain or a destroyed end.");
    }
    if (attempt_gate()) {
        a.length += b.length;
        a.back_destroyed = b.back_destroyed;
        b = Chain{};
        return true;
    }
    a.back_destroyed = true;
    a.front_destroyed |= a.length == 1;
    b.front_destroyed = true;
    b.back_destroyed |= b.length == 1;
    destroy(2);
    return false;
}

bool CountingFabric::repair_end(Chain &c, End end) {
    bool &flag = end == End::kFront ? c.front_destroyed : c.back_destroyed;
    if (!flag) {
        throw ProtocolLogicError("repair_end on an intact end.");
    }
    if (c.length < 3) {
        return false;
    }
    c.length -= 2;
    // A single survivor is both ends, so a destroyed far end covers the front too.
    bool other = end == End::kFront ? c.back_destroyed : c.front_destroyed;
    flag = c.length == 1 && other;
    ledger_.z_measurements++;
    live_--;
    return true;
}

void CountingFabric::discard(Chain &c) {
    size_t n = alive_in(c);
    ledger_.qubits_discarded += n;
    live_ -= n;
    c = Chain{};
}

void CountingFabric::trim(Chain &c, size_t n) {
    if (n == 0 || n > c.length || c.front_destroyed || c.back_destroyed) {
        throw ProtocolLogicError("trim needs an intact chain of at least n >= 1 qubits.");
    }
    if (c.length == n) {
        return;
    }
    size_t excess = c.length - n;
    ledger_.z_measurements++;
    ledger_.qubits_discarded += excess - 1;
    live_ -= excess;
    c.length = n;
}

std::optional<CountingFabric::Plus> CountingFabric::plus_join(Chain &a, Chain &b) {
    if (a.length != b.length || a.length % 2 == 0 || alive_in(a) != a.length || alive_in(b) != b.length) {
        throw ProtocolLogicError("plus_join needs two intact chains of equal odd length.");
    }
    size_t k = a.length / 2;
    size_t total = a.length + b.length;
    a = Chain{};
    b = Chain{};
    if (!attempt_gate()) {
        destroy(2);
        ledger_.qubits_discarded += total - 2;
        live_ -= total - 2;
        return std::nullopt;
    }
    ledger_.x_measurements++;
    live_--;
    Plus s;
    s.center = next_center_++;
    s.legs.fill(k);
    return s;
}

CountingFabric::Plus CountingFabric::provision_plus(size_t n_l) {
    allocate(4 * n_l + 1);
    Plus s;
    s.center = next_center_++;
    s.legs.fill(n_l);
    return s;
}

bool CountingFabric::cpf_legs(Plus &a, Direction da, Plus &b, Direction db) {
    size_t ia = index(da);
    size_t ib = index(db);
    if (a.legs[ia] == 0 || b.legs[ib] == 0 || a.end_destroyed[ia] || b.end_destroyed[ib]) {
        throw ProtocolLogicError("cpf_legs on an empty leg or a destroyed end.");
    }
    if (attempt_gate()) {
        return true;
    }
    a.end_destroyed[ia] = true;
    b.end_destroyed[ib] = true;
    destroy(2);
    return false;
}

size_t CountingFabric::repair_leg(Plus &s, Direction d) {
    size_t i = index(d);
    if (!s.end_destroyed[i]) {
        throw ProtocolLogicError("repair_leg on an intact leg end.");
    }
    s.end_destroyed[i] = false;
    if (s.legs[i] >= 2) {
        s.legs[i] -= 2;
        ledger_.z_measurements++;
        live_--;
    } else {
        s.legs[i] = 0;
    }
    return s.legs[i];
}

void CountingFabric::fuse_legs(Plus &a, Direction da, Plus &b, Direction db) {
    size_t ia = index(da);
    size_t ib = index(db);
    size_t n = a.legs[ia] + b.legs[ib];
    if (a.legs[ia] == 0 || b.legs[ib] == 0 || a.end_destroyed[ia] || b.end_destroyed[ib] || n % 2) {
        throw InvalidFusion("fuse_legs needs two intact legs with an even total length.");
    }
    ledger_.x_measurements += n;
    live_ -= n;
    a.legs[ia] = 0;
    b.legs[ib] = 0;
    bonds_.emplace_back(a.center, b.center);
}

void CountingFabric::detach_leg(Plus &s, Direction d) {
    size_t i = index(d);
    size_t n = s.legs[i];
    size_t alive = n - (n > 0 && s.end_destroyed[i]);
    if (alive > 0) {
        ledger_.z_measurements++;
        ledger_.qubits_discarded += alive - 1;
        live_ -= alive;
    }
    s.legs[i] = 0;
    s.end_destroyed[i] = false;
}

void CountingFabric::describe(const Chain &c, Topology &out) const {
    out.segments.push_back(alive_in(c));
    out.live_qubits = live_;
}

void CountingFabric::describe(std::span<const Plus> nodes, Topology &out) const {
    for (const Plus &s : nodes) {
        std::array<size_t, 4> legs{};
        for (size_t i = 0; i < 4; i++) {
            legs[i] = s.legs[i] - (s.legs[i] > 0 && s.end_destroyed[i]);
        }
        out.nodes.push_back(legs);
    }
    auto find = [&](uint64_t center) {
        for (size_t i = 0; i < nodes.size(); i++) {
            if (nodes[i].center == center) {
                return i;
            }
        }
        return Topology::kMalformed;
    };
    std::vector<std::pair<size_t, size_t>> bonds;
    for (const auto &[u, v] : bonds_) {
        size_t i = find(u);
        size_t j = find(v);
        if (i != Topology::kMalformed && j != Topology::kMalformed) {
            bonds.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(bonds.begin(), bonds.end());
    out.bonds.insert(out.bonds.end(), bonds.begin(), bonds.end());
    out.live_qubits = live_;
}

}  // namespace clusterforge
