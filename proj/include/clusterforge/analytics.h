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


// Closed-form and exact-recursion predictions for the chain and lattice protocols.
// Every time is in units of one gate attempt; convert with ProtocolParams::ta_seconds.

#ifndef CLUSTERFORGE_ANALYTICS_H
#define CLUSTERFORGE_ANALYTICS_H

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace clusterforge {

/// n_c = 4(1 - p)/p: chains longer than this grow on average under connect-and-repair.
double critical_length(double p);

/// n_c + 1 written as 4/p - 3. Equal to critical_length(p) + 1 up to rounding.
double shifted_critical_length(double p);

/// Default seed-chain length of the combined protocol: 2^ceil(log2(n_c + 1)).
size_t default_seed_length(double p);

/// Mean merged length after connect-and-repair of two n0-chains.
/// exact: sum_{i=0}^{floor(n0/2)} 2(n0 - 2i) p (1-p)^i, where exhausted pairs count as zero.
/// approximate: 2 n0 - n_c.
double expected_connected_length(size_t n0, double p, bool exact);

/// T(n) = T0 + (1/p) log2[(n - n_c)/(n0 - n_c)]. Throws std::domain_error when n or n0 <= n_c.
double connect_repair_T(double n, double n0, double T0, double p);
/// M(n) = (M0 + 1/p)(n - n_c)/(n0 - n_c) - 1/p.
double connect_repair_M(double n, double n0, double M0, double p);

/// Repeater protocol for an n-chain.
/// exact: iterate T_i = (T_{i-1} + 1)/p from T_0 = 0; n must be a power of two.
/// closed: (1/p)^{log2 n}.
double repeater_T(double n, double p, bool exact);
/// exact: iterate M_i = (2 M_{i-1} + 1)/p from M_0 = 0. closed: (2/p)^{log2 n} / 2.
double repeater_M(double n, double p, bool exact);

/// (1/p)^{log2(n_c + 1)} + (1/p) log2(n - n_c). Throws std::domain_error when n <= n_c.
double combined_T(double n, double p);
/// (2/p)^{log2(n_c + 1)} (n - n_c) / 2.
double combined_M(double n, double p);

/// (2/p) ln(2N/epsilon) rounded up to the next even integer.
size_t leg_length(size_t N, double epsilon, double p);
/// 1 - (1-p)^{ceil(n_l/2)}: a leg pair allows ceil(n_l/2) attempts before reaching the centers.
double edge_success_prob(double p, size_t n_l);

/// Edges of a rows x cols grid graph.
size_t grid_edge_count(size_t rows, size_t cols);

struct LatticeTerms {
    double chains_time;      ///< (1/p)^{log2(4/p - 3)}
    double growth_time;      ///< (1/p) log2((4/p)[ln(2N/eps) - 1])
    double connection_time;  ///< (1/p) ln(2N/eps)
    double chains_attempts;  ///< (2/p)^{2 + log2(4/p - 3)} N [ln(2N/eps) - 1]
    double connection_attempts;  ///< 2N/p

    double time() const {
        return chains_time + growth_time + connection_time;
    }
    double attempts() const {
        return chains_attempts + connection_attempts;
    }
};

/// Requires N >= 1, 0 < epsilon < 1, 0 < p < 1 and ln(2N/epsilon) > 1.
LatticeTerms lattice_terms(size_t N, double epsilon, double p);
double lattice_T(size_t N, double epsilon, double p);
double lattice_M(size_t N, double epsilon, double p);

/// Predictions bundled for reports. Unused fields stay zero.
struct AnalyticReport {
    double n_c = 0;
    size_t n0 = 0;
    double T_pred = 0;
    double M_pred = 0;
    size_t n_l = 0;
    double p_c = 0;
    /// Named terms of the formulas behind T_pred and M_pred, in evaluation order.
    std::vector<std::pair<std::string, double>> terms;
};

AnalyticReport chain_report(size_t n, double p);
AnalyticReport repeater_report(unsigned m, double p);
AnalyticReport lattice_report(size_t rows, size_t cols, double epsilon, double p);

}  // namespace clusterforge

#endif
