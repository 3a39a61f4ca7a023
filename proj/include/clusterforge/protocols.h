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


// Assembly protocols, written once against the operations shared by CountingFabric
// and ExactFabric. Sub-builds that would run side by side are timed separately and
// charged through FabricCore::charge_time; everything else accrues serially.

#ifndef CLUSTERFORGE_PROTOCOLS_H
#define CLUSTERFORGE_PROTOCOLS_H

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "clusterforge/analytics.h"
#include "clusterforge/fabric.h"

namespace clusterforge {

/// Runs fn() as a branch that starts at the current clock. Returns its result and
/// duration and rewinds the clock, so the caller can charge sibling branches together.
template <class Fabric, class Fn>
auto timed(Fabric &f, Fn &&fn) {
    double start = f.ledger().elapsed_time;
    auto result = fn();
    double duration = f.ledger().elapsed_time - start;
    f.ledger().elapsed_time = start;
    return std::pair{std::move(result), duration};
}

/// Builds a 2^m chain by recursive doubling. A failed join discards both halves and
/// rebuilds them from scratch.
template <class Fabric>
typename Fabric::Chain build_chain_repeater(Fabric &f, unsigned m, uint64_t &restarts) {
    if (m == 0) {
        return f.fresh_chain();
    }
    while (true) {
        auto [a, ta] = timed(f, [&] { return build_chain_repeater(f, m - 1, restarts); });
        auto [b, tb] = timed(f, [&] { return build_chain_repeater(f, m - 1, restarts); });
        std::array<double, 2> times{ta, tb};
        f.charge_time(times);
        if (f.cpf_join(a, b)) {
            return std::move(a);
        }
        f.discard(a);
        f.discard(b);
        restarts++;
    }
}

/// Joins b onto the back of a, repairing both facing ends after every failure.
/// Returns false when a repair would leave a chain with no qubits; the chains are
/// then left as they are for the caller to discard.
template <class Fabric>
bool connect_and_repair(Fabric &f, typename Fabric::Chain &a, typename Fabric::Chain &b) {
    while (true) {
        if (f.cpf_join(a, b)) {
            return true;
        }
        bool a_ok = f.repair_end(a, End::kBack);
        bool b_ok = f.repair_end(b, End::kFront);
        if (!a_ok || !b_ok) {
            return false;
        }
    }
}

/// Chain after `round` connect-and-repair doublings of 2^seed_exponent seed chains.
/// Both inputs of a round are built in parallel; an exhausted round rebuilds both.
template <class Fabric>
typename Fabric::Chain build_doubling_round(Fabric &f, unsigned round, unsigned seed_exponent, uint64_t &restarts) {
    if (round == 0) {
        return build_chain_repeater(f, seed_exponent, restarts);
    }
    while (true) {
        auto [a, ta] = timed(f, [&] { return build_doubling_round(f, round - 1, seed_exponent, restarts); });
        auto [b, tb] = timed(f, [&] { return build_doubling_round(f, round - 1, seed_exponent, restarts); });
        std::array<double, 2> times{ta, tb};
        f.charge_time(times);
        if (connect_and_repair(f, a, b)) {
            return std::move(a);
        }
        f.discard(a);
        f.discard(b);
        restarts++;
    }
}

struct CombinedPlan {
    bool repeater_only = false;
    /// Repeater depth: of the whole chain when repeater_only, else of each seed chain.
    unsigned exponent = 0;
    size_t seed_length = 0;
    /// Doubling rounds after which the expected length n_r = 2 n_{r-1} - n_c reaches n.
    unsigned rounds = 0;
};

inline unsigned ceil_log2(size_t n) {
    unsigned m = 0;
    while ((size_t{1} << m) < n) {
        m++;
    }
    return m;
}

/// Plans the combined protocol for target n. params.n0 overrides the seed length,
/// which is always rounded up to a power of two.
inline CombinedPlan plan_combined(size_t n, const ProtocolParams &params) {
    if (n == 0) {
        throw std::invalid_argument("Target chain length must be at least 1.");
    }
    CombinedPlan plan;
    size_t n0 = params.n0 ? params.n0 : default_seed_length(params.p);
    plan.exponent = ceil_log2(n0);
    plan.seed_length = size_t{1} << plan.exponent;
    if (n <= plan.seed_length) {
        plan.repeater_only = true;
        plan.exponent = ceil_log2(n);
        return plan;
    }
    double nc = critical_length(params.p);
    if (!(static_cast<double>(plan.seed_length) > nc)) {
        throw std::domain_error("Seed chains must be longer than the critical length.");
    }
    double len = static_cast<double>(plan.seed_length);
    while (len < static_cast<double>(n)) {
        len = 2 * len - nc;
        plan.rounds++;
    }
    return plan;
}

template <class Fabric>
struct ChainBuild {
    typename Fabric::Chain chain;
    uint64_t restarts = 0;
};

/// Repeater up to the seed length, then connect-and-repair doublings until the chain
/// holds at least n qubits. The result may overshoot n.
template <class Fabric>
ChainBuild<Fabric> build_chain_combined(Fabric &f, size_t n) {
    CombinedPlan plan = plan_combined(n, f.params());
    ChainBuild<Fabric> out;
    if (plan.repeater_only) {
        out.chain = build_chain_repeater(f, plan.exponent, out.restarts);
        return out;
    }
    unsigned round = plan.rounds;
    double start = f.ledger().elapsed_time;
    auto [chain, elapsed] = timed(f, [&] { return build_doubling_round(f, round, plan.exponent, out.restarts); });
    out.chain = std::move(chain);
    // A short result is doubled once more with a partner of the same round. As in every
    // other round, the partner counts as built alongside the chain it joins.
    while (f.length(out.chain) < n) {
        auto [partner, t_partner] =
            timed(f, [&] { return build_doubling_round(f, round, plan.exponent, out.restarts); });
        round++;
        std::array<double, 2> times{elapsed, t_partner};
        f.charge_time(times);
        bool ok = connect_and_repair(f, out.chain, partner);
        if (!ok) {
            f.discard(out.chain);
            f.discard(partner);
            out.restarts++;
            auto [rebuilt, t_rebuilt] =
                timed(f, [&] { return build_doubling_round(f, round, plan.exponent, out.restarts); });
            out.chain = std::move(rebuilt);
            f.ledger().elapsed_time += t_rebuilt;
        }
        elapsed = f.ledger().elapsed_time - start;
        f.ledger().elapsed_time = start;
    }
    f.ledger().elapsed_time = start + elapsed;
    return out;
}

template <class Fabric>
struct PlusBuild {
    typename Fabric::Plus plus;
    uint64_t chains_consumed = 0;
    uint64_t join_attempts = 0;
};

/// Two (2 n_l + 1)-chains built in parallel and joined at their middles. A failed
/// join discards both chains and starts over.
template <class Fabric>
PlusBuild<Fabric> build_plus_shape(Fabric &f, size_t n_l) {
    if (n_l == 0) {
        throw std::invalid_argument("Leg length must be at least 1.");
    }
    size_t len = 2 * n_l + 1;
    PlusBuild<Fabric> out;
    auto make_chain = [&] {
        auto built = build_chain_combined(f, len);
        f.trim(built.chain, len);
        return std::move(built.chain);
    };
    while (true) {
        auto [a, ta] = timed(f, make_chain);
        auto [b, tb] = timed(f, make_chain);
        std::array<double, 2> times{ta, tb};
        f.charge_time(times);
        out.chains_consumed += 2;
        out.join_attempts++;
        if (auto s = f.plus_join(a, b)) {
            out.plus = std::move(*s);
            return out;
        }
    }
}

/// Connects two centers through facing legs, starting from the leg ends and cutting
/// two qubits per leg after each failure. On success the remaining leg qubits are
/// fused away, leaving a direct center-center bond. Returns false once a leg is used up.
template <class Fabric>
bool connect_centers(Fabric &f, typename Fabric::Plus &a, Direction da, typename Fabric::Plus &b, Direction db) {
    while (f.leg_length(a, da) > 0 && f.leg_length(b, db) > 0) {
        if (f.cpf_legs(a, da, b, db)) {
            f.fuse_legs(a, da, b, db);
            return true;
        }
        f.repair_leg(a, da);
        f.repair_leg(b, db);
    }
    return false;
}

struct LatticeOptions {
    /// Build every "+" shape from chains. When false, shapes are provisioned ready-made
    /// and only the connection phase is simulated and charged.
    bool simulate_blocks = true;
};

/// Grid edge between row-major node indices, with the legs it uses.
struct GridEdge {
    size_t a;
    size_t b;
    Direction da;
    Direction db;
};

/// Row-major: for each node, its east edge then its south edge.
inline std::vector<GridEdge> grid_edges(size_t rows, size_t cols) {
    std::vector<GridEdge> edges;
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            size_t i = r * cols + c;
            if (c + 1 < cols) {
                edges.push_back({i, i + 1, Direction::kEast, Direction::kWest});
            }
            if (r + 1 < rows) {
                edges.push_back({i, i + cols, Direction::kSouth, Direction::kNorth});
            }
        }
    }
    return edges;
}

template <class Fabric>
struct LatticeBuild {
    size_t rows = 0;
    size_t cols = 0;
    size_t n_l = 0;
    std::vector<typename Fabric::Plus> nodes;
    size_t realized_edges = 0;
    size_t failed_edges = 0;
    bool success = false;
};

/// Square lattice of rows x cols centers. Leg length comes from params.n_l or from
/// leg_length(N, epsilon, p). Blocks are built in parallel, then every edge is tried in
/// its own parallel branch in row-major order. The first failed edge ends the build.
/// On success the unused boundary legs are detached.
template <class Fabric>
LatticeBuild<Fabric> build_square_lattice(Fabric &f, size_t rows, size_t cols, LatticeOptions options = {}) {
    if (rows < 2 || cols < 2) {
        throw std::invalid_argument("The lattice needs at least 2 rows and 2 columns.");
    }
    const ProtocolParams &params = f.params();
    LatticeBuild<Fabric> out;
    out.rows = rows;
    out.cols = cols;
    out.n_l = params.n_l ? params.n_l : leg_length(rows * cols, params.epsilon, params.p);

    std::vector<double> times;
    for (size_t k = 0; k < rows * cols; k++) {
        if (options.simulate_blocks) {
            auto [built, t] = timed(f, [&] { return build_plus_shape(f, out.n_l); });
            out.nodes.push_back(std::move(built.plus));
            times.push_back(t);
        } else {
            out.nodes.push_back(f.provision_plus(out.n_l));
        }
    }
    f.charge_time(times);

    times.clear();
    for (const GridEdge &e : grid_edges(rows, cols)) {
        auto [ok, t] = timed(f, [&] { return connect_centers(f, out.nodes[e.a], e.da, out.nodes[e.b], e.db); });
        times.push_back(t);
        if (!ok) {
            out.failed_edges++;
            f.charge_time(times);
            return out;
        }
        out.realized_edges++;
    }
    f.charge_time(times);

    for (auto &node : out.nodes) {
        for (Direction d : kDirections) {
            f.detach_leg(node, d);
        }
    }
    out.success = true;
    return out;
}

}  // namespace clusterforge

#endif
