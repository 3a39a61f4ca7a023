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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clusterforge {

namespace {

void check_p(double p) {
    if (!(p > 0 && p <= 1)) {
        throw std::invalid_argument("p must lie in (0, 1].");
    }
}

void check_lattice(size_t N, double epsilon, double p) {
    if (N == 0) {
        throw std::invalid_argument("N must be at least 1.");
    }
    if (!(epsilon > 0 && epsilon < 1)) {
        throw std::invalid_argument("epsilon must lie in (0, 1).");
    }
    check_p(p);
}

bool is_power_of_two(double n) {
    if (!(n >= 1) || n != std::floor(n) || n > 0x1p62) {
        return false;
    }
    auto k = static_cast<unsigned long long>(n);
    return (k & (k - 1)) == 0;
}

}  // namespace

double critical_length(double p) {
    check_p(p);
    return 4 * (1 - p) / p;
}

double shifted_critical_length(double p) {
    check_p(p);
    return 4 / p - 3;
}

size_t default_seed_length(double p) {
    double target = critical_length(p) + 1;
    // The tolerance keeps exact powers of two (p = 0.8 gives n_c + 1 = 2) from rounding up.
    int m = static_cast<int>(std::ceil(std::log2(target) - 1e-9));
    return size_t{1} << std::max(m, 0);
}

double expected_connected_length(size_t n0, double p, bool exact) {
    check_p(p);
    if (n0 == 0) {
        throw std::invalid_argument("n0 must be at least 1.");
    }
    if (!exact) {
        return 2.0 * static_cast<double>(n0) - critical_length(p);
    }
    double sum = 0;
    double weight = p;
    for (size_t i = 0; 2 * i <= n0; i++) {
        sum += 2.0 * static_cast<double>(n0 - 2 * i) * weight;
        weight *= 1 - p;
    }
    return sum;
}

double connect_repair_T(double n, double n0, double T0, double p) {
    double nc = critical_length(p);
    if (!(n > nc && n0 > nc)) {
        throw std::domain_error("Connect-and-repair growth needs n and n0 above the critical length.");
    }
    return T0 + std::log2((n - nc) / (n0 - nc)) / p;
}

double connect_repair_M(double n, double n0, double M0, double p) {
    double nc = critical_length(p);
    if (!(n > nc && n0 > nc)) {
        throw std::domain_error("Connect-and-repair growth needs n and n0 above the critical length.");
    }
    return (M0 + 1 / p) * (n - nc) / (n0 - nc) - 1 / p;
}

double repeater_T(double n, double p, bool exact) {
    check_p(p);
    if (!exact) {
        if (!(n >= 2)) {
            throw std::invalid_argument("Repeater closed form needs n >= 2.");
        }
        return std::pow(1 / p, std::log2(n));
    }
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("Exact repeater recursion needs n to be a power of two.");
    }
    double t = 0;
    for (double len = 1; len < n; len *= 2) {
        t = (t + 1) / p;
    }
    return t;
}

double repeater_M(double n, double p, bool exact) {
    check_p(p);
    if (!exact) {
        if (!(n >= 2)) {
            throw std::invalid_argument("Repeater closed form needs n >= 2.");
        }
        return std::pow(2 / p, std::log2(n)) / 2;
    }
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("Exact repeater recursion needs n to be a power of two.");
    }
    double m = 0;
    for (double len = 1; len < n; len *= 2) {
        m = (2 * m + 1) / p;
    }
    return m;
}

double combined_T(double n, double p) {
    double nc = critical_length(p);
    if (!(n > nc)) {
        throw std::domain_error("combined_T needs n above the critical length.");
    }
    return std::pow(1 / p, std::log2(nc + 1)) + std::log2(n - nc) / p;
}

double combined_M(double n, double p) {
    double nc = critical_length(p);
    if (!(n > nc)) {
        throw std::domain_error("combined_M needs n above the critical length.");
    }
    return std::pow(2 / p, std::log2(nc + 1)) * (n - nc) / 2;
}

size_t leg_length(size_t N, double epsilon, double p) {
    check_lattice(N, epsilon, p);
    double raw = (2 / p) * std::log(2.0 * static_cast<double>(N) / epsilon);
    auto half = static_cast<size_t>(std::ceil(raw / 2));
    return 2 * std::max<size_t>(half, 1);
}

double edge_success_prob(double p, size_t n_l) {
    check_p(p);
    return 1 - std::pow(1 - p, static_cast<double>((n_l + 1) / 2));
}

size_t grid_edge_count(size_t rows, size_t cols) {
    if (rows == 0 || cols == 0) {
        return 0;
    }
    return rows * (cols - 1) + cols * (rows - 1);
}

LatticeTerms lattice_terms(size_t N, double epsilon, double p) {
    check_lattice(N, epsilon, p);
    if (p >= 1) {
        throw std::domain_error("The lattice formulas need p < 1.");
    }
    double log_term = std::log(2.0 * static_cast<double>(N) / epsilon);
    if (!(log_term > 1)) {
        throw std::domain_error("The lattice formulas need ln(2N/epsilon) > 1.");
    }
    double shifted = shifted_critical_length(p);
    double n = static_cast<double>(N);
    LatticeTerms t;
    t.chains_time = std::pow(1 / p, std::log2(shifted));
    t.growth_time = std::log2((4 / p) * (log_term - 1)) / p;
    t.connection_time = log_term / p;
    t.chains_attempts = std::pow(2 / p, 2 + std::log2(shifted)) * n * (log_term - 1);
    t.connection_attempts = 2 * n / p;
    return t;
}

double lattice_T(size_t N, double epsilon, double p) {
    return lattice_terms(N, epsilon, p).time();
}

double lattice_M(size_t N, double epsilon, double p) {
    return lattice_terms(N, epsilon, p).attempts();
}

AnalyticReport chain_report(size_t n, double p) {
    AnalyticReport r;
    r.n_c = critical_length(p);
    r.n0 = default_seed_length(p);
    double nd = static_cast<double>(n);
    if (nd > r.n_c) {
        r.T_pred = combined_T(nd, p);
        r.M_pred = combined_M(nd, p);
        r.terms = {
            {"T_seed", std::pow(1 / p, std::log2(r.n_c + 1))},
            {"T_growth", std::log2(nd - r.n_c) / p},
            {"M_total", r.M_pred},
        };
    }
    return r;
}

AnalyticReport repeater_report(unsigned m, double p) {
    AnalyticReport r;
    r.n_c = critical_length(p);
    double n = std::ldexp(1.0, static_cast<int>(m));
    r.n0 = static_cast<size_t>(n);
    r.T_pred = repeater_T(n, p, true);
    r.M_pred = repeater_M(n, p, true);
    if (n >= 2) {
        r.terms = {
            {"T_closed", repeater_T(n, p, false)},
            {"M_closed", repeater_M(n, p, false)},
        };
    }
    return r;
}

AnalyticReport lattice_report(size_t rows, size_t cols, double epsilon, double p) {
    size_t N = rows * cols;
    AnalyticReport r;
    r.n_c = critical_length(p);
    r.n0 = default_seed_length(p);
    r.n_l = leg_length(N, epsilon, p);
    r.p_c = edge_success_prob(p, r.n_l);
    if (p < 1 && std::log(2.0 * static_cast<double>(N) / epsilon) > 1) {
        LatticeTerms t = lattice_terms(N, epsilon, p);
        r.T_pred = t.time();
        r.M_pred = t.attempts();
        r.terms = {
            {"T_chains", t.chains_time},
            {"T_growth", t.growth_time},
            {"T_connection", t.connection_time},
            {"M_chains", t.chains_attempts},
            {"M_connection", t.connection_attempts},
        };
    }
    return r;
}

}  // namespace clusterforge
