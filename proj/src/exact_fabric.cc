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


#include "clusterforge/exact_fabric.h"

#include <algorithm>
#include <string>

#include "clusterforge/errors.h"

namespace clusterforge {

namespace {

size_t index(Direction d) {
    return static_cast<size_t>(d);
}

}  // namespace

ExactFabric::ExactFabric(const ProtocolParams &params, size_t cap)
    : FabricCore(params), cap_(cap), tableau_(Tableau::plus_state(1)), outcome_rng_(RandomStream(params.seed).split(1)) {
    if (cap == 0) {
        throw InvalidSize("The qubit cap must be positive.");
    }
    slots_.resize(1);
    free_.push_back(0);
}

size_t ExactFabric::slot(Qubit q) const {
    auto it = slot_of_.find(q);
    if (it == slot_of_.end()) {
        throw ProtocolLogicError("Qubit " + std::to_string(q) + " is not alive.");
    }
    return it->second;
}

void ExactFabric::require_idle() const {
    if (pending_) {
        throw ProtocolLogicError("A fusion is half done; its partner must be fused next.");
    }
}

ExactFabric::Qubit ExactFabric::allocate() {
    size_t s;
    if (!free_.empty()) {
        s = free_.back();
        free_.pop_back();
    } else {
        if (slots_.size() >= cap_) {
            throw CapExceeded("Exact backend would exceed its cap of " + std::to_string(cap_) + " qubits.");
        }
        s = tableau_.add_qubit();
        slots_.emplace_back();
    }
    Qubit id = next_id_++;
    slots_[s] = Slot{id, true, false, false, {}};
    slot_of_[id] = s;
    ledger_.qubits_allocated++;
    live_++;
    return id;
}

bool ExactFabric::adjacent(size_t a, size_t b) const {
    const auto &n = slots_[a].nbrs;
    return std::find(n.begin(), n.end(), b) != n.end();
}

void ExactFabric::toggle_edge(size_t a, size_t b) {
    auto flip = [](std::vector<size_t> &list, size_t v) {
        auto it = std::find(list.begin(), list.end(), v);
        if (it == list.end()) {
            list.push_back(v);
        } else {
            list.erase(it);
        }
    };
    flip(slots_[a].nbrs, b);
    flip(slots_[b].nbrs, a);
}

void ExactFabric::unlink(size_t s) {
    for (size_t u : slots_[s].nbrs) {
        auto &list = slots_[u].nbrs;
        list.erase(std::find(list.begin(), list.end(), s));
    }
    slots_[s].nbrs.clear();
}

void ExactFabric::apply_cz(size_t a, size_t b) {
    tableau_.apply_cz(a, b);
    // CZ X_a CZ = X_a Z_b.
    slots_[b].fz ^= slots_[a].fx;
    slots_[a].fz ^= slots_[b].fx;
    toggle_edge(a, b);
}

bool ExactFabric::gate(size_t a, size_t b) {
    if (attempt_gate()) {
        apply_cz(a, b);
        return true;
    }
    // A failed gate leaves both qubits Z-projected with known outcomes.
    measure_z(a);
    measure_z(b);
    ledger_.qubits_destroyed += 2;
    return false;
}

void ExactFabric::free_slot(size_t s) {
    slot_of_.erase(slots_[s].id);
    slots_[s] = Slot{};
    free_.push_back(s);
    live_--;
}

int ExactFabric::measure_z(size_t s) {
    int raw = tableau_.measure_z(s, outcome_rng_).value;
    int rel = slots_[s].fx ? -raw : raw;
    if (rel < 0) {
        for (size_t u : slots_[s].nbrs) {
            slots_[u].fz ^= true;
        }
    }
    unlink(s);
    if (raw < 0) {
        tableau_.apply_x(s);
    }
    tableau_.apply_h(s);
    free_slot(s);
    return rel;
}

void ExactFabric::release(size_t s) {
    int raw = tableau_.measure_z(s, outcome_rng_).value;
    unlink(s);
    if (raw < 0) {
        tableau_.apply_x(s);
    }
    tableau_.apply_h(s);
    free_slot(s);
}

ExactFabric::Chain ExactFabric::fresh_chain() {
    require_idle();
    Chain c;
    c.qubits.push_back(allocate());
    return c;
}

ExactFabric::Chain ExactFabric::provision_chain(size_t n) {
    require_idle();
    if (n == 0) {
        throw InvalidSize("Cannot provision an empty chain.");
    }
    Chain c;
    for (size_t k = 0; k < n; k++) {
        c.qubits.push_back(allocate());
        if (k > 0) {
            apply_cz(slot(c.qubits[k - 1]), slot(c.qubits[k]));
        }
    }
    return c;
}

bool ExactFabric::cpf_join(Chain &a, Chain &b) {
    require_idle();
    if (a.qubits.empty() || b.qubits.empty() || a.back_destroyed || b.front_destroyed) {
        throw ProtocolLogicError("cpf_join on an empty chain or a destroyed end.");
    }
    if (gate(slot(a.qubits.back()), slot(b.qubits.front()))) {
        a.qubits.insert(a.qubits.end(), b.qubits.begin(), b.qubits.end());
        a.back_destroyed = b.back_destroyed;
        b = Chain{};
        return true;
    }
    a.back_destroyed = true;
    a.front_destroyed |= a.qubits.size() == 1;
    b.front_destroyed = true;
    b.back_destroyed |= b.qubits.size() == 1;
    return false;
}

bool ExactFabric::repair_end(Chain &c, End end) {
    require_idle();
    bool &flag = end == End::kFront ? c.front_destroyed : c.back_destroyed;
    if (!flag) {
        throw ProtocolLogicError("repair_end on an intact end.");
    }
    if (c.qubits.size() < 3) {
        return false;
    }
    if (end == End::kFront) {
        c.qubits.pop_front();
        measure_z(slot(c.qubits.front()));
        c.qubits.pop_front();
    } else {
        c.qubits.pop_back();
        measure_z(slot(c.qubits.back()));
        c.qubits.pop_back();
    }
    // A single survivor is both ends, so a destroyed far end covers the front too.
    bool other = end == End::kFront ? c.back_destroyed : c.front_destroyed;
    flag = c.qubits.size() == 1 && other;
    ledger_.z_measurements++;
    return true;
}

void ExactFabric::discard(Chain &c) {
    require_idle();
    for (Qubit q : c.qubits) {
        if (alive(q)) {
            measure_z(slot(q));
            ledger_.qubits_discarded++;
        }
    }
    c = Chain{};
}

void ExactFabric::trim(Chain &c, size_t n) {
    require_idle();
    if (n == 0 || n > c.qubits.size() || c.front_destroyed || c.back_destroyed) {
        throw ProtocolLogicError("trim needs an intact chain of at least n >= 1 qubits.");
    }
    if (c.qubits.size() == n) {
        return;
    }
    measure_z(slot(c.qubits[n]));
    ledger_.z_measurements++;
    for (size_t k = n + 1; k < c.qubits.size(); k++) {
        measure_z(slot(c.qubits[k]));
        ledger_.qubits_discarded++;
    }
    c.qubits.resize(n);
}

std::optional<ExactFabric::Plus> ExactFabric::plus_join(Chain &a, Chain &b) {
    require_idle();
    size_t len = a.qubits.size();
    if (len != b.qubits.size() || len % 2 == 0 || a.front_destroyed || a.back_destroyed || b.front_destroyed ||
        b.back_destroyed) {
        throw ProtocolLogicError("plus_join needs two intact chains of equal odd length.");
    }
    size_t k = len / 2;
    size_t m1 = slot(a.qubits[k]);
    size_t m2 = slot(b.qubits[k]);
    tableau_.apply_h(m1);
    std::swap(slots_[m1].fx, slots_[m1].fz);

    if (!attempt_gate()) {
        // m1 is no longer in graph form; the whole of both chains is thrown away.
        for (const Chain *c : {&a, &b}) {
            for (Qubit q : c->qubits) {
                release(slot(q));
            }
        }
        ledger_.qubits_destroyed += 2;
        ledger_.qubits_discarded += 2 * len - 2;
        a = Chain{};
        b = Chain{};
        return std::nullopt;
    }

    tableau_.apply_cz(m1, m2);
    slots_[m2].fz ^= slots_[m1].fx;
    slots_[m1].fz ^= slots_[m2].fx;
    std::vector<size_t> n1 = slots_[m1].nbrs;
    int raw = tableau_.measure_x(m1, outcome_rng_).value;
    int rel = slots_[m1].fz ? -raw : raw;
    unlink(m1);
    for (size_t u : n1) {
        toggle_edge(m2, u);
        if (rel < 0) {
            slots_[u].fz ^= true;
        }
    }
    if (raw < 0) {
        tableau_.apply_z(m1);
    }
    free_slot(m1);
    ledger_.x_measurements++;

    Plus s;
    s.center = b.qubits[k];
    for (size_t j = 1; j <= k; j++) {
        s.legs[index(Direction::kNorth)].push_back(a.qubits[k - j]);
        s.legs[index(Direction::kSouth)].push_back(a.qubits[k + j]);
        s.legs[index(Direction::kWest)].push_back(b.qubits[k - j]);
        s.legs[index(Direction::kEast)].push_back(b.qubits[k + j]);
    }
    a = Chain{};
    b = Chain{};
    return s;
}

ExactFabric::Plus ExactFabric::provision_plus(size_t n_l) {
    require_idle();
    Plus s;
    s.center = allocate();
    for (auto &leg : s.legs) {
        Qubit prev = s.center;
        for (size_t j = 0; j < n_l; j++) {
            Qubit q = allocate();
            apply_cz(slot(prev), slot(q));
            leg.push_back(q);
            prev = q;
        }
    }
    return s;
}

bool ExactFabric::cpf_legs(Plus &a, Direction da, Plus &b, Direction db) {
    require_idle();
    size_t ia = index(da);
    size_t ib = index(db);
    if (a.legs[ia].empty() || b.legs[ib].empty() || a.end_destroyed[ia] || b.end_destroyed[ib]) {
        throw ProtocolLogicError("cpf_legs on an empty leg or a destroyed end.");
    }
    if (gate(slot(a.legs[ia].back()), slot(b.legs[ib].back()))) {
        return true;
    }
    a.end_destroyed[ia] = true;
    b.end_destroyed[ib] = true;
    return false;
}

size_t ExactFabric::repair_leg(Plus &s, Direction d) {
    require_idle();
    size_t i = index(d);
    if (!s.end_destroyed[i]) {
        throw ProtocolLogicError("repair_leg on an intact leg end.");
    }
    auto &leg = s.legs[i];
    s.end_destroyed[i] = false;
    leg.pop_back();
    if (!leg.empty()) {
        measure_z(slot(leg.back()));
        leg.pop_back();
        ledger_.z_measurements++;
    }
    return leg.size();
}

void ExactFabric::fuse_legs(Plus &a, Direction da, Plus &b, Direction db) {
    require_idle();
    size_t ia = index(da);
    size_t ib = index(db);
    auto &la = a.legs[ia];
    auto &lb = b.legs[ib];
    if (la.empty() || lb.empty() || a.end_destroyed[ia] || b.end_destroyed[ib] || (la.size() + lb.size()) % 2) {
        throw InvalidFusion("fuse_legs needs two intact legs with an even total length.");
    }
    std::vector<Qubit> interior(la.begin(), la.end());
    interior.insert(interior.end(), lb.rbegin(), lb.rend());
    for (Qubit q : interior) {
        fuse_interior(q);
    }
    la.clear();
    lb.clear();
}

void ExactFabric::fuse_interior(Qubit q) {
    size_t s = slot(q);
    if (!pending_) {
        if (slots_[s].nbrs.size() != 2) {
            throw InvalidFusion("Qubit " + std::to_string(q) + " is not an interior path qubit.");
        }
        int raw = tableau_.measure_x(s, outcome_rng_).value;
        pending_ = PendingFusion{s, slots_[s].fz ? -raw : raw, raw};
        ledger_.x_measurements++;
        return;
    }

    size_t b = pending_->slot;
    size_t c = s;
    if (c == b || !adjacent(b, c) || slots_[c].nbrs.size() != 2) {
        throw InvalidFusion("Second fusion qubit must be an interior path neighbor of the first.");
    }
    size_t a = slots_[b].nbrs[0] == c ? slots_[b].nbrs[1] : slots_[b].nbrs[0];
    size_t d = slots_[c].nbrs[0] == b ? slots_[c].nbrs[1] : slots_[c].nbrs[0];
    if (a == d) {
        throw InvalidFusion("Fusion pair closes a triangle.");
    }
    int raw_c = tableau_.measure_x(c, outcome_rng_).value;
    int rel_c = slots_[c].fz ? -raw_c : raw_c;
    int rel_b = pending_->outcome;
    int raw_b = pending_->raw;
    pending_.reset();

    unlink(b);
    unlink(c);
    toggle_edge(a, d);
    if (rel_b < 0) {
        slots_[d].fz ^= true;
    }
    if (rel_c < 0) {
        slots_[a].fz ^= true;
    }
    for (auto [slot_index, r] : {std::pair{b, raw_b}, std::pair{c, raw_c}}) {
        if (r < 0) {
            tableau_.apply_z(slot_index);
        }
        free_slot(slot_index);
    }
    ledger_.x_measurements++;
}

void ExactFabric::detach_leg(Plus &s, Direction d) {
    require_idle();
    size_t i = index(d);
    auto &leg = s.legs[i];
    if (s.end_destroyed[i] && !leg.empty()) {
        leg.pop_back();
    }
    if (!leg.empty()) {
        measure_z(slot(leg.front()));
        ledger_.z_measurements++;
        for (size_t k = 1; k < leg.size(); k++) {
            measure_z(slot(leg[k]));
            ledger_.qubits_discarded++;
        }
    }
    leg.clear();
    s.end_destroyed[i] = false;
}

std::vector<ExactFabric::Qubit> ExactFabric::neighbors(Qubit q) const {
    std::vector<Qubit> out;
    for (size_t u : slots_[slot(q)].nbrs) {
        out.push_back(slots_[u].id);
    }
    return out;
}

PauliString ExactFabric::frame() const {
    PauliString f(tableau_.num_qubits());
    for (size_t s = 0; s < slots_.size(); s++) {
        f.set_x(s, slots_[s].fx);
        f.set_z(s, slots_[s].fz);
    }
    return f;
}

bool ExactFabric::verify(std::span<const Qubit> vertices, std::span<const std::pair<Qubit, Qubit>> edges) const {
    Graph g;
    for (Qubit q : vertices) {
        if (!alive(q)) {
            return false;
        }
        g.vertices.push_back(slot(q));
    }
    for (const auto &[u, v] : edges) {
        if (!alive(u) || !alive(v)) {
            return false;
        }
        g.edges.emplace_back(slot(u), slot(v));
    }
    return verify_cluster(tableau_, g, frame());
}

bool ExactFabric::verify_bookkeeping() const {
    if (pending_) {
        return false;
    }
    // Free slots are isolated |+> qubits, so they belong in the check too.
    Graph g;
    for (size_t s = 0; s < slots_.size(); s++) {
        g.vertices.push_back(s);
        for (size_t u : slots_[s].nbrs) {
            if (s < u) {
                g.edges.emplace_back(s, u);
            }
        }
    }
    return verify_cluster(tableau_, g, frame());
}

size_t ExactFabric::walk(size_t prev, size_t start) const {
    size_t count = 1;
    size_t cur = start;
    while (true) {
        const auto &n = slots_[cur].nbrs;
        if (n.size() == 1 && n[0] == prev) {
            return count;
        }
        if (n.size() != 2 || (n[0] != prev && n[1] != prev)) {
            return Topology::kMalformed;
        }
        size_t next = n[0] == prev ? n[1] : n[0];
        prev = cur;
        cur = next;
        if (++count > slots_.size()) {
            return Topology::kMalformed;
        }
    }
}

void ExactFabric::describe(const Chain &c, Topology &out) const {
    out.live_qubits = live_;
    std::vector<Qubit> alive_qubits;
    for (Qubit q : c.qubits) {
        if (alive(q)) {
            alive_qubits.push_back(q);
        }
    }
    if (alive_qubits.empty()) {
        out.segments.push_back(0);
        return;
    }
    size_t first = slot(alive_qubits.front());
    const auto &n = slots_[first].nbrs;
    if (n.empty()) {
        out.segments.push_back(1);
    } else if (n.size() == 1) {
        size_t rest = walk(first, n[0]);
        out.segments.push_back(rest == Topology::kMalformed ? rest : rest + 1);
    } else {
        out.segments.push_back(Topology::kMalformed);
    }
}

void ExactFabric::describe(std::span<const Plus> nodes, Topology &out) const {
    out.live_qubits = live_;
    std::vector<size_t> centers;
    for (const Plus &s : nodes) {
        centers.push_back(alive(s.center) ? slot(s.center) : Topology::kMalformed);
    }
    std::vector<std::pair<size_t, size_t>> bonds;
    for (size_t i = 0; i < centers.size(); i++) {
        for (size_t j = i + 1; j < centers.size(); j++) {
            if (centers[i] != Topology::kMalformed && centers[j] != Topology::kMalformed &&
                adjacent(centers[i], centers[j])) {
                bonds.emplace_back(i, j);
            }
        }
    }
    for (size_t i = 0; i < nodes.size(); i++) {
        std::array<size_t, 4> legs{};
        size_t c = centers[i];
        if (c == Topology::kMalformed) {
            legs.fill(Topology::kMalformed);
            out.nodes.push_back(legs);
            continue;
        }
        size_t degree = 0;
        for (size_t d = 0; d < 4; d++) {
            const auto &leg = nodes[i].legs[d];
            if (leg.empty() || !alive(leg.front())) {
                continue;
            }
            size_t first = slot(leg.front());
            legs[d] = adjacent(c, first) ? walk(c, first) : Topology::kMalformed;
            degree++;
        }
        for (const auto &[u, v] : bonds) {
            degree += (u == i) + (v == i);
        }
        if (degree != slots_[c].nbrs.size()) {
            legs.fill(Topology::kMalformed);
        }
        out.nodes.push_back(legs);
    }
    out.bonds.insert(out.bonds.end(), bonds.begin(), bonds.end());
}

}  // namespace clusterforge
