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


#ifndef CLUSTERFORGE_LEDGER_H
#define CLUSTERFORGE_LEDGER_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace clusterforge {

/// How the duration of sub-builds that run side by side is charged to their parent.
enum class TimeModel {
    kMeanField,       ///< Arithmetic mean of the children.
    kStrictParallel,  ///< Maximum of the children.
};

std::string_view time_model_name(TimeModel model);
/// Accepts "mean_field" / "mean-field" and "strict_parallel" / "strict-parallel".
TimeModel parse_time_model(std::string_view text);

/// Resource counters of one trial. Time is measured in units of one gate attempt.
struct ResourceLedger {
    uint64_t cpf_attempts = 0;
    uint64_t cpf_successes = 0;
    uint64_t z_measurements = 0;
    uint64_t x_measurements = 0;
    double elapsed_time = 0;

    // Qubit bookkeeping for the conservation audit:
    // allocated == live + destroyed + z_measurements + x_measurements + discarded.
    uint64_t qubits_allocated = 0;
    uint64_t qubits_destroyed = 0;
    uint64_t qubits_discarded = 0;

    /// Throws AuditFailure when the counters contradict each other.
    void audit(uint64_t live_qubits) const;

    friend bool operator==(const ResourceLedger &, const ResourceLedger &) = default;
};

/// Adds the combined duration of sub-builds that ran in parallel. Empty input is a no-op.
void charge_time(ResourceLedger &ledger, TimeModel model, std::span<const double> child_times);

struct ProtocolParams {
    double p = 0.5;
    /// Seconds per attempt. Only used when converting reports to wall-clock time.
    double ta_seconds = 100e-9;
    double epsilon = 0.05;
    TimeModel time_model = TimeModel::kMeanField;
    uint64_t seed = 0;
    /// Seed-chain length for the combined protocol. Zero selects 2^ceil(log2(n_c + 1)).
    size_t n0 = 0;
    /// Leg length of "+" shapes. Zero derives it from the lattice size, epsilon and p.
    size_t n_l = 0;

    /// Throws std::invalid_argument describing the first out-of-range field.
    void validate() const;
};

}  // namespace clusterforge

#endif
