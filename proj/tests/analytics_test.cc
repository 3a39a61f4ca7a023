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


#include "clusterforge/analytics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace clusterforge {
namespace {

// Reference values below were computed independently with exact rational arithmetic
// (recursions) or double-precision evaluation of the formulas, then frozen.

TEST(Analytics, CriticalLength) {
    EXPECT_DOUBLE_EQ(critical_length(1.0), 0);
    EXPECT_DOUBLE_EQ(critical_length(0.1), 36);
    EXPECT_DOUBLE_EQ(critical_length(0.5), 4);
    EXPECT_THROW(critical_length(0), std::invalid_argument);
    EXPECT_THROW(critical_length(1.5), std::invalid_argument);
    EXPECT_DOUBLE_EQ(shifted_critical_length(0.1), 37);
}

TEST(Analytics, DefaultSeedLength) {
    EXPECT_EQ(default_seed_length(1.0), 1u);
    EXPECT_EQ(default_seed_length(0.8), 2u);
    EXPECT_EQ(default_seed_length(0.5), 8u);
    EXPECT_EQ(default_seed_length(0.1), 64u);
}

TEST(Analytics, ConnectedLength) {
    EXPECT_DOUBLE_EQ(expected_connected_length(10, 1.0, true), 20);
    EXPECT_DOUBLE_EQ(expected_connected_length(10, 1.0, false), 20);
    EXPECT_DOUBLE_EQ(expected_connected_length(100, 0.1, false), 164);
    EXPECT_NEAR(expected_connected_length(100, 0.1, true), 164.18553590746353, 1e-9);
    EXPECT_LT(std::abs(expected_connected_length(100, 0.1, true) - 164), 1);
    EXPECT_THROW(expected_connected_length(0, 0.5, true), std::invalid_argument);
}

TEST(Analytics, ConnectRepairScaling) {
    EXPECT_NEAR(connect_repair_T(64, 8, 14, 0.5), 21.81378119121704, 1e-9);
    EXPECT_NEAR(connect_repair_M(64, 8, 42, 0.5), 658, 1e-9);
    EXPECT_DOUBLE_EQ(connect_repair_T(8, 8, 14, 0.5), 14);
    EXPECT_DOUBLE_EQ(connect_repair_M(8, 8, 42, 0.5), 42);
    EXPECT_NEAR(connect_repair_T(4.001, 4.001, 3, 0.5), 3, 1e-12);
    EXPECT_THROW(connect_repair_T(4, 8, 14, 0.5), std::domain_error);
    EXPECT_THROW(connect_repair_M(64, 3, 14, 0.5), std::domain_error);
}

TEST(Analytics, RepeaterRecursions) {
    // M_i and T_i for i = 1..4.
    struct Row {
        double p;
        std::vector<double> M;
        std::vector<double> T;
    };
    std::vector<Row> rows = {
        {0.25, {4, 36, 292, 2340}, {4, 20, 84, 340}},
        {0.5, {2, 10, 42, 170}, {2, 6, 14, 30}},
        {0.75, {4.0 / 3, 44.0 / 9, 388.0 / 27, 3212.0 / 81}, {4.0 / 3, 28.0 / 9, 148.0 / 27, 700.0 / 81}},
    };
    for (const Row &row : rows) {
        for (int i = 1; i <= 4; i++) {
            double n = std::ldexp(1.0, i);
            EXPECT_NEAR(repeater_M(n, row.p, true), row.M[i - 1], 1e-9) << row.p << " " << i;
            EXPECT_NEAR(repeater_T(n, row.p, true), row.T[i - 1], 1e-9) << row.p << " " << i;
        }
    }
    EXPECT_DOUBLE_EQ(repeater_M(1, 0.5, true), 0);
    EXPECT_DOUBLE_EQ(repeater_M(8, 0.5, false), 32);
    EXPECT_DOUBLE_EQ(repeater_T(8, 0.5, false), 8);
    EXPECT_DOUBLE_EQ(repeater_M(2, 0.3, false), repeater_M(2, 0.3, true));
    EXPECT_DOUBLE_EQ(repeater_T(2, 0.3, false), repeater_T(2, 0.3, true));
    EXPECT_THROW(repeater_M(6, 0.5, true), std::invalid_argument);
    EXPECT_THROW(repeater_T(1, 0.5, false), std::invalid_argument);
}

TEST(Analytics, RepeaterRecursionConsistency) {
    for (double p : {0.05, 0.2, 0.5, 0.9, 1.0}) {
        for (int i = 0; i < 10; i++) {
            double n = std::ldexp(1.0, i);
            EXPECT_NEAR(repeater_M(2 * n, p, true), (2 * repeater_M(n, p, true) + 1) / p,
                        1e-12 * repeater_M(2 * n, p, true));
            EXPECT_NEAR(repeater_T(2 * n, p, true), (repeater_T(n, p, true) + 1) / p,
                        1e-12 * repeater_T(2 * n, p, true));
        }
    }
}

TEST(Analytics, ClosedFormUndercountsRepeaterAttempts) {
    for (double p : {0.05, 0.1, 0.25, 0.4, 0.5}) {
        for (int i = 2; i < 12; i++) {
            double n = std::ldexp(1.0, i);
            EXPECT_GE(repeater_M(n, p, true), repeater_M(n, p, false)) << p << " " << n;
        }
    }
}

TEST(Analytics, CombinedScaling) {
    EXPECT_NEAR(combined_T(64, 0.5), 16.813781191217036, 1e-9);
    EXPECT_NEAR(combined_M(64, 0.5), 750, 1e-9);
    EXPECT_NEAR(combined_T(38, 0.1), 161987.00542921797, 1e-6);
    EXPECT_NEAR(std::pow(10.0, std::log2(37.0)), 161977.00542921797, 1e-6);
    // p = 1: one attempt for the seed stage and no growth term at n = n_c + 1.
    EXPECT_DOUBLE_EQ(combined_T(1, 1.0), 1);
    EXPECT_THROW(combined_T(36, 0.1), std::domain_error);
    EXPECT_THROW(combined_M(4, 0.5), std::domain_error);
}

TEST(Analytics, LegLengthAndEdgeProbability) {
    EXPECT_EQ(leg_length(100, 0.01, 0.1), 200u);
    EXPECT_EQ(leg_length(9, 0.05, 0.2), 60u);
    EXPECT_EQ(leg_length(1, 0.99, 1.0) % 2, 0u);
    EXPECT_DOUBLE_EQ(edge_success_prob(0.5, 2), 0.5);
    EXPECT_NEAR(edge_success_prob(0.1, 40), 0.8784233454094307, 1e-15);
    EXPECT_DOUBLE_EQ(edge_success_prob(1.0, 2), 1);
    EXPECT_THROW(leg_length(0, 0.1, 0.5), std::invalid_argument);
    EXPECT_THROW(leg_length(4, 1.0, 0.5), std::invalid_argument);
    EXPECT_EQ(grid_edge_count(2, 2), 4u);
    EXPECT_EQ(grid_edge_count(3, 3), 12u);
    EXPECT_EQ(grid_edge_count(3, 5), 22u);
}

TEST(Analytics, SizingGuarantee) {
    for (size_t N : {1, 4, 9, 16, 100, 1000, 10000}) {
        for (double eps : {0.001, 0.01, 0.05, 0.2, 0.5}) {
            for (double p : {0.01, 0.05, 0.1, 0.2, 0.5, 0.9}) {
                size_t n_l = leg_length(N, eps, p);
                EXPECT_EQ(n_l % 2, 0u);
                double all_edges = std::pow(edge_success_prob(p, n_l), 2.0 * static_cast<double>(N));
                EXPECT_GE(all_edges, 1 - eps) << N << " " << eps << " " << p;
            }
        }
    }
}

TEST(Analytics, LatticeTerms) {
    LatticeTerms t = lattice_terms(9, 0.05, 0.2);
    EXPECT_NEAR(t.chains_time, 719.4720379288041, 1e-9);
    EXPECT_NEAR(t.growth_time, 33.05306337827873, 1e-9);
    EXPECT_NEAR(t.connection_time, 29.43052015725078, 1e-9);
    EXPECT_NEAR(t.chains_attempts, 53785852.9431057, 1e-4);
    EXPECT_NEAR(t.connection_attempts, 90, 1e-12);
    EXPECT_DOUBLE_EQ(lattice_T(9, 0.05, 0.2), t.time());
    EXPECT_DOUBLE_EQ(lattice_M(9, 0.05, 0.2), t.attempts());

    LatticeTerms headline = lattice_terms(100, 0.01, 0.1);
    EXPECT_NEAR(headline.chains_time / 1.6e5, 1, 0.02);
    EXPECT_NEAR(headline.chains_time * 100e-9, 16.2e-3, 0.1e-3);

    LatticeTerms small = lattice_terms(1, 0.5, 0.5);
    for (double v : {small.chains_time, small.growth_time, small.connection_time, small.chains_attempts,
                     small.connection_attempts}) {
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_GT(v, 0);
    }
    EXPECT_THROW(lattice_terms(9, 0.05, 1.0), std::domain_error);
    EXPECT_THROW(lattice_terms(1, 0.9, 0.5), std::domain_error);
}

// The seed term of the chain formula and the chain term of the lattice formula share
// their exponent, because n_c + 1 = 4/p - 3.
TEST(Analytics, ChainAndLatticeSeedTermsAgree) {
    for (int k = 1; k <= 10; k++) {
        double p = 0.05 * k;
        // The growth term vanishes at n = n_c + 1.
        double chain_seed = combined_T(critical_length(p) + 1, p);
        double lattice_seed = lattice_terms(100, 0.01, p).chains_time;
        EXPECT_NEAR(chain_seed / lattice_seed, 1, 1e-12) << p;
    }
}

TEST(Analytics, Monotonicity) {
    std::vector<double> ps = {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9};
    for (size_t i = 0; i + 1 < ps.size(); i++) {
        double lo = ps[i];
        double hi = ps[i + 1];
        EXPECT_GT(critical_length(lo), critical_length(hi));
        for (double n : {100.0, 1000.0, 1e5}) {
            EXPECT_GT(combined_T(n, lo), combined_T(n, hi));
            EXPECT_GT(combined_M(n, lo), combined_M(n, hi));
        }
        for (size_t N : {9, 100, 10000}) {
            EXPECT_GT(lattice_T(N, 0.05, lo), lattice_T(N, 0.05, hi));
            EXPECT_GT(lattice_M(N, 0.05, lo), lattice_M(N, 0.05, hi));
        }
    }
    for (double p : ps) {
        double prev_t = 0;
        double prev_m = 0;
        for (double n : {100.0, 200.0, 1000.0, 1e4, 1e6}) {
            EXPECT_GT(combined_T(n, p), prev_t);
            EXPECT_GT(combined_M(n, p), prev_m);
            prev_t = combined_T(n, p);
            prev_m = combined_M(n, p);
        }
        prev_t = 0;
        prev_m = 0;
        for (size_t N : {4, 9, 100, 1000, 100000}) {
            EXPECT_GT(lattice_T(N, 0.05, p), prev_t);
            EXPECT_GT(lattice_M(N, 0.05, p), prev_m);
            prev_t = lattice_T(N, 0.05, p);
            prev_m = lattice_M(N, 0.05, p);
        }
    }
}

TEST(Analytics, Reports) {
    AnalyticReport r = repeater_report(3, 0.5);
    EXPECT_DOUBLE_EQ(r.M_pred, 42);
    EXPECT_DOUBLE_EQ(r.T_pred, 14);
    EXPECT_EQ(r.n0, 8u);
    ASSERT_EQ(r.terms.size(), 2u);
    EXPECT_DOUBLE_EQ(r.terms[1].second, 32);

    AnalyticReport c = chain_report(64, 0.5);
    EXPECT_DOUBLE_EQ(c.n_c, 4);
    EXPECT_NEAR(c.M_pred, 750, 1e-9);

    AnalyticReport l = lattice_report(3, 3, 0.05, 0.2);
    EXPECT_EQ(l.n_l, 60u);
    EXPECT_NEAR(l.p_c, 1 - std::pow(0.8, 30), 1e-15);
    EXPECT_EQ(l.terms.size(), 5u);
    for (const auto &[name, value] : l.terms) {
        EXPECT_TRUE(std::isfinite(value)) << name;
        EXPECT_GE(value, 0) << name;
    }
}

}  // namespace
}  // namespace clusterforge
