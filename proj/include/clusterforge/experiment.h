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


// Seeded Monte Carlo trial sets over either backend, and the file formats around them.

#ifndef CLUSTERFORGE_EXPERIMENT_H
#define CLUSTERFORGE_EXPERIMENT_H

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clusterforge/ledger.h"
#include "clusterforge/stats.h"

namespace clusterforge {

enum class Backend { kCounting, kExact };

enum class Workload {
    kRepeater,  ///< 2^m chain by the repeater protocol.
    kConnect,   ///< connect_and_repair on two provisioned n0-chains.
    kCombined,  ///< Chain of at least n qubits by the combined protocol.
    kPlus,      ///< One "+" shape with legs of n_l.
    kLattice,   ///< rows x cols square lattice.
};

std::string_view backend_name(Backend b);
Backend parse_backend(std::string_view text);
std::string_view workload_name(Workload w);
Workload parse_workload(std::string_view text);

/// A summary or config file that does not have the expected keys or values.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Workload workload = Workload::kCombined;
    Backend backend = Backend::kCounting;
    ProtocolParams params;
    size_t n = 64;
    unsigned m = 3;
    size_t rows = 3;
    size_t cols = 3;
    /// False provisions lattice blocks ready-made instead of building them.
    bool simulate_blocks = true;
    uint64_t trials = 1;
    /// Worker threads; 0 uses the hardware concurrency.
    unsigned threads = 0;
    size_t cap = 4096;

    /// Throws std::invalid_argument for unusable values.
    void validate() const;
};

struct TrialRecord {
    uint64_t trial = 0;
    uint64_t seed = 0;
    uint64_t attempts = 0;
    uint64_t successes = 0;
    uint64_t z_measurements = 0;
    uint64_t x_measurements = 0;
    double time = 0;
    uint64_t final_size = 0;
    bool success = false;

    friend bool operator==(const TrialRecord &, const TrialRecord &) = default;
};

/// Stabilizer check of the final state of one exact-backend trial.
struct VerifyReport {
    bool built = false;  ///< The protocol reported success.
    size_t satisfied = 0;
    size_t total = 0;
    bool bookkeeping = false;
};

/// Throws CapExceeded when an exact run would clearly need more qubits than the cap.
void check_exact_cap(const ExperimentConfig &config);

/// Runs trial `index` with seed trial_seed(params.seed, index). Exact-backend trials that
/// report success must pass their stabilizer check, or AuditFailure is thrown.
TrialRecord run_trial(const ExperimentConfig &config, uint64_t index);

/// Runs one trial on the exact backend and checks every stabilizer of the target graph.
VerifyReport verify_trial(const ExperimentConfig &config, uint64_t index);

/// All trials on a worker pool; the result is ordered by trial index.
std::vector<TrialRecord> run_trials(const ExperimentConfig &config);

/// Metrics: attempts, successes, z_measurements, x_measurements, time, final_size, success.
std::vector<TrialStats> aggregate(const std::vector<TrialRecord> &records);

/// Round-trip decimal form used in every output file.
std::string format_double(double x);

void write_csv(std::ostream &out, const std::vector<TrialRecord> &records);

using Summary = std::map<std::string, std::string>;

Summary make_summary(const ExperimentConfig &config, const std::vector<TrialStats> &stats);
/// One "key: value" line per entry, in key order.
void write_summary(std::ostream &out, const Summary &summary);
Summary read_summary(std::istream &in);
/// Rebuilds the config recorded in a summary. Throws SchemaError.
ExperimentConfig config_from_summary(const Summary &summary);

struct ComparisonRow {
    std::string metric;
    double mean = 0;
    double std_error = 0;
    double analytic_exact = 0;   ///< NaN when no exact prediction exists.
    double analytic_closed = 0;  ///< NaN when no closed form applies.
    double z = 0;                ///< Against analytic_exact; NaN without one.
    bool flagged = false;        ///< |z| > 3.
};

/// Empirical means next to the analytic predictions for the summarized workload.
std::vector<ComparisonRow> compare(const Summary &summary);
void write_comparison(std::ostream &out, const std::vector<ComparisonRow> &rows);

}  // namespace clusterforge

#endif
