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


#include "clusterforge/protocols.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "clusterforge/analytics.h"
#include "clusterforge/counting_fabric.h"
#include "clusterforge/exact_fabric.h"
#include "clusterforge/stats.h"

namespace clusterforge {
namespace {

using Qubit = ExactFabric::Qubit;
using Edges = std::vector<std::pair<Qubit, Qubit>>;

ProtocolParams params_with(double p, uint64_t seed = 1) {
    ProtocolParams params;
    params.p = p;
    params.seed = seed;
    return params;
}

void expect_within_3se(const RunningStats &s, double expected, const std::string &what) {
    double z = z_score(s.mean(), expected, s.stderr_of_mean());
    EXPECT_LE(std::abs(z), 3.0) << what << ": mean " << s.mean() << " expected " << expected << " stderr "
                                << s.stderr_of_mean();
}

bool verify_chain(const ExactFabric &f, const ExactFabric::Chain &c) {
    std::vector<Qubit> v(c.qubits.begin(), c.qubits.end());
    Edges e;
    for (size_t k = 1; k < v.size(); k++) {
        e.emplace_back(v[k - 1], v[k]);
    }
    return f.verify(v, e) && f.verify_bookkeeping();
}

bool verify_plus(const ExactFabric &f, const ExactFabric::Plus &s) {
    std::vector<Qubit> v = {s.center};
    Edges e;
    for (const auto &leg : s.legs) {
        Qubit prev = s.center;
        for (Qubit q : leg) {
            v.push_back(q);
            e.emplace_back(prev, q);
            prev = q;
        }
    }
    return f.verify(v, e) && f.verify_bookkeeping();
}

bool verify_lattice(const ExactFabric &f, const LatticeBuild<ExactFabric> &l) {
    std::vector<Qubit> v;
    for (const auto &node : l.nodes) {
        v.push_back(node.center);
    }
    Edges e;
    for (const GridEdge &g : grid_edges(l.rows, l.cols)) {
        e.emplace_back(l.nodes[g.a].center, l.nodes[g.b].center);
    }
    return f.verify(v, e) && f.verify_bookkeeping();
}

// ---- Repeater ----

TEST(Repeater, SingleDeterministicGate) {
    CountingFabric f(params_with(1.0));
    uint64_t restarts = 0;
    auto c = build_chain_repeater(f, 1, restarts);
    EXPECT_EQ(f.length(c), 2u);
    EXPECT_EQ(f.ledger().cpf_attempts, 1u);
    EXPECT_DOUBLE_EQ(f.ledger().elapsed_time, 1);
    EXPECT_EQ(restarts, 0u);
    auto single = build_chain_repeater(f, 0, restarts);
    EXPECT_EQ(f.length(single), 1u);
}

TEST(Repeater, MatchesExactRecursions) {
    const int trials = 10000;
    for (double p : {0.25, 0.5, 0.75}) {
        for (unsigned m = 1; m <= 4; m++) {
            RunningStats attempts;
            RunningStats time;
            for (int t = 0; t < trials; t++) {
                CountingFabric f(params_with(p, trial_seed(1000 + m, static_cast<uint64_t>(t))));
                uint64_t restarts = 0;
                auto c = build_chain_repeater(f, m, restarts);
                ASSERT_EQ(f.length(c), size_t{1} << m);
                attempts.add(static_cast<double>(f.ledger().cpf_attempts));
                time.add(f.ledger().elapsed_time);
            }
            double n = std::ldexp(1.0, static_cast<int>(m));
            std::string label = "p=" + std::to_string(p) + " m=" + std::to_string(m);
            expect_within_3se(attempts, repeater_M(n, p, true), "attempts " + label);
            expect_within_3se(time, repeater_T(n, p, true), "time " + label);
        }
    }
}

TEST(Repeater, StrictParallelNeverFasterThanMeanField) {
    for (uint64_t seed = 0; seed < 500; seed++) {
        ProtocolParams mean = params_with(0.5, seed);
        ProtocolParams strict = mean;
        strict.time_model = TimeModel::kStrictParallel;
        CountingFabric a(mean);
        CountingFabric b(strict);
        uint64_t ra = 0;
        uint64_t rb = 0;
        build_chain_repeater(a, 4, ra);
        build_chain_repeater(b, 4, rb);
        EXPECT_EQ(a.ledger().cpf_attempts, b.ledger().cpf_attempts);
        EXPECT_GE(b.ledger().elapsed_time, a.ledger().elapsed_time);
    }
}

// ---- Connect and repair ----

TEST(ConnectAndRepair, CertainJoin) {
    CountingFabric f(params_with(1.0));
    auto a = f.provision_chain(5);
    auto b = f.provision_chain(5);
    EXPECT_TRUE(connect_and_repair(f, a, b));
    EXPECT_EQ(f.length(a), 10u);
    EXPECT_EQ(f.ledger().cpf_attempts, 1u);
}

RunningStats merged_lengths(size_t n0, double p, int trials, uint64_t master) {
    RunningStats s;
    for (int t = 0; t < trials; t++) {
        CountingFabric f(params_with(p, trial_seed(master, static_cast<uint64_t>(t))));
        auto a = f.provision_chain(n0);
        auto b = f.provision_chain(n0);
        bool ok = connect_and_repair(f, a, b);
        s.add(ok ? static_cast<double>(f.length(a)) : 0.0);
    }
    return s;
}

TEST(ConnectAndRepair, MeanMergedLength) {
    RunningStats s = merged_lengths(100, 0.1, 10000, 3);
    expect_within_3se(s, expected_connected_length(100, 0.1, true), "n0=100 p=0.1");
    EXPECT_NEAR(s.mean() / 164, 1, 0.01);
}

TEST(ConnectAndRepair, GrowthOverValidRange) {
    struct Case {
        size_t n0;
        double p;
    };
    // Each case has n0 > n_c and exp(-n0 p / 2) < 1e-3.
    for (Case c : {Case{40, 0.5}, Case{200, 0.1}, Case{20, 0.75}, Case{64, 0.25}}) {
        ASSERT_LT(std::exp(-static_cast<double>(c.n0) * c.p / 2), 1e-3);
        RunningStats s = merged_lengths(c.n0, c.p, 10000, 17 + c.n0);
        expect_within_3se(s, expected_connected_length(c.n0, c.p, true),
                          "n0=" + std::to_string(c.n0) + " p=" + std::to_string(c.p));
    }
}

TEST(ConnectAndRepair, EachFailureCostsFourQubits) {
    for (uint64_t seed = 0; seed < 2000; seed++) {
        CountingFabric f(params_with(0.3, seed));
        size_t n0 = 2 + seed % 15;
        auto a = f.provision_chain(n0);
        auto b = f.provision_chain(n0);
        bool ok = connect_and_repair(f, a, b);
        uint64_t failures = f.ledger().cpf_attempts - f.ledger().cpf_successes;
        if (ok) {
            EXPECT_EQ(f.length(a), 2 * n0 - 4 * failures);
            EXPECT_EQ(f.ledger().z_measurements, 2 * failures);
        } else {
            // The last failure found a chain too short to repair.
            EXPECT_EQ(f.ledger().z_measurements, 2 * (failures - 1));
            EXPECT_LT(f.length(a), 3u);
        }
        f.audit();
    }
}

TEST(ConnectAndRepair, EachFailureCostsFourQubitsStepwise) {
    for (uint64_t seed = 0; seed < 300; seed++) {
        CountingFabric f(params_with(0.2, seed));
        auto a = f.provision_chain(21);
        auto b = f.provision_chain(21);
        size_t total = 42;
        while (!f.cpf_join(a, b)) {
            bool a_ok = f.repair_end(a, End::kBack);
            bool b_ok = f.repair_end(b, End::kFront);
            if (!a_ok || !b_ok) {
                break;
            }
            EXPECT_EQ(f.length(a) + f.length(b), total - 4);
            total -= 4;
        }
    }
}

// ---- Combined protocol ----

TEST(Combined, CertainGatesUseNMinusOneAttempts) {
    for (size_t n : {2, 16, 64, 256}) {
        CountingFabric f(params_with(1.0));
        auto built = build_chain_combined(f, n);
        EXPECT_EQ(f.length(built.chain), n);
        EXPECT_EQ(f.ledger().cpf_attempts, n - 1);
        EXPECT_EQ(built.restarts, 0u);
    }
}

TEST(Combined, Plan) {
    ProtocolParams params = params_with(0.5);
    CombinedPlan small = plan_combined(6, params);
    EXPECT_TRUE(small.repeater_only);
    EXPECT_EQ(small.exponent, 3u);
    CombinedPlan plan = plan_combined(64, params);
    EXPECT_FALSE(plan.repeater_only);
    EXPECT_EQ(plan.seed_length, 8u);
    // 8 -> 12 -> 20 -> 36 -> 68.
    EXPECT_EQ(plan.rounds, 4u);
    params.n0 = 20;
    EXPECT_EQ(plan_combined(64, params).seed_length, 32u);
    params.n0 = 3;
    EXPECT_THROW(plan_combined(64, params), std::domain_error);
    EXPECT_THROW(plan_combined(0, params_with(0.5)), std::invalid_argument);
}

TEST(Combined, ReachesTarget) {
    for (uint64_t seed = 0; seed < 300; seed++) {
        for (size_t n : {5, 30, 64, 100}) {
            CountingFabric f(params_with(0.5, seed));
            auto built = build_chain_combined(f, n);
            EXPECT_GE(f.length(built.chain), n);
            EXPECT_FALSE(built.chain.front_destroyed || built.chain.back_destroyed);
            f.audit();
        }
    }
}

// Mean length and time of round r of the doubling recursion, from 32-qubit seeds at p = 0.5.
TEST(Combined, DoublingRecursion) {
    const int trials = 10000;
    const unsigned rounds = 4;
    ProtocolParams base = params_with(0.5);
    base.n0 = 32;
    std::vector<RunningStats> length(rounds + 1);
    std::vector<RunningStats> time(rounds + 1);
    for (unsigned r = 0; r <= rounds; r++) {
        for (int t = 0; t < trials; t++) {
            ProtocolParams params = base;
            params.seed = trial_seed(500 + r, static_cast<uint64_t>(t));
            CountingFabric f(params);
            uint64_t restarts = 0;
            auto c = build_doubling_round(f, r, 5, restarts);
            length[r].add(static_cast<double>(f.length(c)));
            time[r].add(f.ledger().elapsed_time);
        }
    }
    EXPECT_DOUBLE_EQ(length[0].mean(), 32);
    double nc = critical_length(0.5);
    for (unsigned r = 1; r <= rounds; r++) {
        double predicted = 2 * length[r - 1].mean() - nc;
        double se = std::hypot(length[r].stderr_of_mean(), 2 * length[r - 1].stderr_of_mean());
        EXPECT_LE(std::abs(length[r].mean() - predicted), 3 * se) << "round " << r;
        double dt = time[r].mean() - time[r - 1].mean();
        double se_t = std::hypot(time[r].stderr_of_mean(), time[r - 1].stderr_of_mean());
        EXPECT_LE(std::abs(dt - 2.0), 3 * se_t) << "round " << r;
    }
}

// ---- Plus shapes ----

TEST(PlusShape, CertainJoin) {
    CountingFabric f(params_with(1.0));
    auto built = build_plus_shape(f, 2);
    EXPECT_EQ(built.chains_consumed, 2u);
    EXPECT_EQ(built.join_attempts, 1u);
    for (Direction d : kDirections) {
        EXPECT_EQ(f.leg_length(built.plus, d), 2u);
    }
    EXPECT_EQ(f.live_qubits(), 9u);
    f.audit();
    EXPECT_THROW(build_plus_shape(f, 0), std::invalid_argument);
}

TEST(PlusShape, ChainsConsumed) {
    RunningStats chains;
    for (uint64_t t = 0; t < 10000; t++) {
        CountingFabric f(params_with(0.25, trial_seed(9, t)));
        auto built = build_plus_shape(f, 1);
        chains.add(static_cast<double>(built.chains_consumed));
        ASSERT_EQ(f.live_qubits(), 5u);
    }
    expect_within_3se(chains, 8, "chains consumed at p=0.25");
}

// ---- Center connections ----

TEST(ConnectCenters, CertainConnection) {
    for (size_t n_l : {1, 2, 6}) {
        CountingFabric f(params_with(1.0));
        auto a = f.provision_plus(n_l);
        auto b = f.provision_plus(n_l);
        EXPECT_TRUE(connect_centers(f, a, Direction::kEast, b, Direction::kWest));
        EXPECT_EQ(f.ledger().cpf_attempts, 1u);
        // Every leg qubit between the centers is X-measured.
        EXPECT_EQ(f.ledger().x_measurements, 2 * n_l);
        EXPECT_EQ(f.leg_length(a, Direction::kEast), 0u);
    }
}

TEST(ConnectCenters, SuccessRateMatchesBudget) {
    struct Case {
        double p;
        size_t n_l;
    };
    for (Case c : {Case{0.5, 2}, Case{0.1, 2}, Case{0.1, 10}, Case{0.1, 40}, Case{0.3, 10}}) {
        RunningStats ok;
        uint64_t max_attempts = 0;
        for (uint64_t t = 0; t < 10000; t++) {
            CountingFabric f(params_with(c.p, trial_seed(c.n_l * 7 + 1, t)));
            auto a = f.provision_plus(c.n_l);
            auto b = f.provision_plus(c.n_l);
            ok.add(connect_centers(f, a, Direction::kSouth, b, Direction::kNorth) ? 1 : 0);
            max_attempts = std::max(max_attempts, f.ledger().cpf_attempts);
            f.audit();
        }
        EXPECT_EQ(max_attempts, c.n_l / 2);
        expect_within_3se(ok, edge_success_prob(c.p, c.n_l),
                          "p=" + std::to_string(c.p) + " n_l=" + std::to_string(c.n_l));
    }
}

// ---- Lattice ----

TEST(Lattice, CertainTwoByTwo) {
    ProtocolParams params = params_with(1.0);
    params.n_l = 2;
    CountingFabric f(params);
    auto l = build_square_lattice(f, 2, 2, LatticeOptions{false});
    EXPECT_TRUE(l.success);
    EXPECT_EQ(l.realized_edges, 4u);
    EXPECT_EQ(l.failed_edges, 0u);
    EXPECT_EQ(f.ledger().cpf_attempts, 4u);
    // All edges run side by side: one attempt of wall time.
    EXPECT_DOUBLE_EQ(f.ledger().elapsed_time, 1);
    EXPECT_EQ(f.live_qubits(), 4u);
    Topology t;
    f.describe(l.nodes, t);
    EXPECT_EQ(t.bonds, (std::vector<std::pair<size_t, size_t>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
    f.audit();
    EXPECT_THROW(build_square_lattice(f, 1, 3), std::invalid_argument);
}

TEST(Lattice, DerivedLegLength) {
    CountingFabric f(params_with(1.0));
    auto l = build_square_lattice(f, 2, 3, LatticeOptions{false});
    EXPECT_EQ(l.n_l, leg_length(6, 0.05, 1.0));
    EXPECT_EQ(l.realized_edges, grid_edge_count(2, 3));
}

TEST(Lattice, StopsAtFirstFailedEdge) {
    for (uint64_t seed = 0; seed < 500; seed++) {
        ProtocolParams params = params_with(0.3, seed);
        params.n_l = 2;
        CountingFabric f(params);
        auto l = build_square_lattice(f, 3, 3, LatticeOptions{false});
        EXPECT_LE(l.realized_edges + l.failed_edges, grid_edge_count(3, 3));
        EXPECT_EQ(l.success, l.failed_edges == 0);
        if (l.success) {
            EXPECT_EQ(l.realized_edges, grid_edge_count(3, 3));
        } else {
            EXPECT_EQ(l.failed_edges, 1u);
        }
        f.audit();
    }
}

TEST(Lattice, SizingGuaranteeWithProvisionedBlocks) {
    RunningStats ok;
    for (uint64_t t = 0; t < 1000; t++) {
        ProtocolParams params = params_with(0.2, trial_seed(77, t));
        params.epsilon = 0.05;
        CountingFabric f(params);
        auto l = build_square_lattice(f, 3, 3, LatticeOptions{false});
        ok.add(l.success ? 1 : 0);
    }
    EXPECT_GE(ok.mean(), 0.95);
}

// ---- Exactness on the tableau backend ----

TEST(Exactness, RepeaterAndConnect) {
    for (uint64_t seed = 0; seed < 30; seed++) {
        ExactFabric f(params_with(0.5, seed));
        uint64_t restarts = 0;
        auto c = build_chain_repeater(f, 4, restarts);
        EXPECT_TRUE(verify_chain(f, c)) << seed;

        ExactFabric g(params_with(0.4, seed));
        auto a = g.provision_chain(12);
        auto b = g.provision_chain(12);
        if (connect_and_repair(g, a, b)) {
            EXPECT_TRUE(verify_chain(g, a)) << seed;
        }
        f.audit();
        g.audit();
    }
}

TEST(Exactness, CombinedChain) {
    for (uint64_t seed = 0; seed < 30; seed++) {
        ExactFabric f(params_with(0.5, seed));
        auto built = build_chain_combined(f, 16);
        EXPECT_GE(f.length(built.chain), 16u);
        EXPECT_TRUE(verify_chain(f, built.chain)) << seed;
        f.audit();
    }
}

TEST(Exactness, PlusShape) {
    for (uint64_t seed = 0; seed < 30; seed++) {
        ExactFabric f(params_with(0.3, seed));
        auto built = build_plus_shape(f, 2);
        EXPECT_TRUE(verify_plus(f, built.plus)) << seed;
        EXPECT_EQ(f.live_qubits(), 9u);
        f.audit();
    }
    ExactFabric f(params_with(1.0));
    auto built = build_plus_shape(f, 1);
    EXPECT_TRUE(verify_plus(f, built.plus));
}

TEST(Exactness, Lattice) {
    ProtocolParams certain = params_with(1.0);
    certain.n_l = 2;
    ExactFabric f(certain);
    auto l = build_square_lattice(f, 2, 2, LatticeOptions{false});
    ASSERT_TRUE(l.success);
    EXPECT_TRUE(verify_lattice(f, l));

    int built = 0;
    for (uint64_t seed = 0; seed < 20; seed++) {
        ExactFabric g(params_with(0.5, seed));
        auto lattice = build_square_lattice(g, 2, 2);
        if (lattice.success) {
            built++;
            EXPECT_TRUE(verify_lattice(g, lattice)) << seed;
        }
        EXPECT_TRUE(g.verify_bookkeeping());
        g.audit();
    }
    EXPECT_GT(built, 10);
}

TEST(Exactness, ThreeByThreeLatticeWithShortLegs) {
    for (uint64_t seed = 0; seed < 20; seed++) {
        ProtocolParams params = params_with(0.6, seed);
        params.n_l = 4;
        ExactFabric f(params);
        auto l = build_square_lattice(f, 3, 3, LatticeOptions{seed % 2 == 0});
        if (l.success) {
            EXPECT_TRUE(verify_lattice(f, l)) << seed;
        }
        EXPECT_TRUE(f.verify_bookkeeping());
    }
}

// ---- Backend agreement on whole protocols ----

template <class Build>
void expect_backends_agree(const ProtocolParams &params, Build &&build) {
    CountingFabric counting(params);
    ExactFabric exact(params);
    Topology tc;
    Topology te;
    build(counting, tc);
    build(exact, te);
    EXPECT_EQ(tc, te) << "seed " << params.seed;
    EXPECT_EQ(counting.ledger(), exact.ledger()) << "seed " << params.seed;
}

TEST(BackendAgreement, Protocols) {
    for (uint64_t seed = 0; seed < 25; seed++) {
        expect_backends_agree(params_with(0.5, seed), [](auto &f, Topology &t) {
            uint64_t restarts = 0;
            auto c = build_chain_repeater(f, 3, restarts);
            f.describe(c, t);
        });
        expect_backends_agree(params_with(0.35, seed), [](auto &f, Topology &t) {
            auto a = f.provision_chain(9);
            auto b = f.provision_chain(9);
            connect_and_repair(f, a, b);
            f.describe(a, t);
            f.describe(b, t);
        });
        expect_backends_agree(params_with(0.5, seed), [](auto &f, Topology &t) {
            auto built = build_chain_combined(f, 16);
            f.describe(built.chain, t);
        });
        expect_backends_agree(params_with(0.3, seed), [](auto &f, Topology &t) {
            auto built = build_plus_shape(f, 2);
            std::vector<std::decay_t<decltype(built.plus)>> nodes = {built.plus};
            f.describe(nodes, t);
        });
        ProtocolParams lattice = params_with(0.5, seed);
        lattice.n_l = 4;
        expect_backends_agree(lattice, [](auto &f, Topology &t) {
            auto l = build_square_lattice(f, 2, 3, LatticeOptions{false});
            f.describe(l.nodes, t);
        });
        expect_backends_agree(params_with(0.5, seed), [](auto &f, Topology &t) {
            auto l = build_square_lattice(f, 2, 2);
            f.describe(l.nodes, t);
        });
    }
}

TEST(Replay, SameSeedSameLedger) {
    for (uint64_t seed = 0; seed < 50; seed++) {
        ProtocolParams params = params_with(0.3, seed);
        CountingFabric a(params);
        CountingFabric b(params);
        build_chain_combined(a, 100);
        build_chain_combined(b, 100);
        EXPECT_EQ(a.ledger(), b.ledger());
    }
}

}  // namespace
}  // namespace clusterforge
