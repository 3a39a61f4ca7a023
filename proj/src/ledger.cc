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


#include "clusterforge/ledger.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "clusterforge/errors.h"

namespace clusterforge {

std::string_view time_model_name(TimeModel model) {
    return model == TimeModel::kMeanField ? "mean_field" : "strict_parallel";
}

TimeModel parse_time_model(std::string_view text) {
    if (text == "mean_field" || text == "mean-field") {
        return TimeModel::kMeanField;
    }
    if (text == "strict_parallel" || text == "strict-parallel") {
        return TimeModel::kStrictParallel;
    }
    throw std::invalid_argument("Unknown time model '" + std::string(text) + "'.");
}

void ResourceLedger::audit(uint64_t live_qubits) const {
    if (cpf_successes > cpf_attempts) {
        throw AuditFailure("More gate successes than attempts.");
    }
    if (!(elapsed_time >= 0)) {
        throw AuditFailure("Negative elapsed time.");
    }
    uint64_t accounted = live_qubits + qubits_destroyed + z_measurements + x_measurements + qubits_discarded;
    if (accounted != qubits_allocated) {
        throw AuditFailure(
            "Qubit conservation violated: allocated " + std::to_string(qubits_allocated) + ", accounted " +
            std::to_string(accounted) + ".");
    }
}

void charge_time(ResourceLedger &ledger, TimeModel model, std::span<const double> child_times) {
    if (child_times.empty()) {
        return;
    }
    if (model == TimeModel::kStrictParallel) {
        ledger.elapsed_time += *std::max_element(child_times.begin(), child_times.end());
    } else {
        double sum = std::accumulate(child_times.begin(), child_times.end(), 0.0);
        ledger.elapsed_time += sum / static_cast<double>(child_times.size());
    }
}

void ProtocolParams::validate() const {
    if (!(p > 0 && p <= 1)) {
        throw std::invalid_argument("p must lie in (0, 1].");
    }
    if (!(epsilon > 0 && epsilon < 1)) {
        throw std::invalid_argument("epsilon must lie in (0, 1).");
    }
    if (!(ta_seconds > 0)) {
        throw std::invalid_argument("ta_seconds must be positive.");
    }
}

}  // namespace clusterforge
