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


#ifndef CLUSTERFORGE_STATS_H
#define CLUSTERFORGE_STATS_H

#include <cstdint>
#include <limits>
#include <string>

namespace clusterforge {

/// Streaming mean and variance (Welford).
class RunningStats {
   public:
    void add(double x);

    uint64_t count() const {
        return count_;
    }
    double mean() const {
        return mean_;
    }
    /// Unbiased sample variance; zero for fewer than two samples.
    double variance() const;
    double stderr_of_mean() const;
    double min() const {
        return min_;
    }
    double max() const {
        return max_;
    }

   private:
    uint64_t count_ = 0;
    double mean_ = 0;
    double m2_ = 0;
    double min_ = std::numeric_limits<double>::infinity();
    double max_ = -std::numeric_limits<double>::infinity();
};

struct TrialStats {
    std::string metric;
    uint64_t count = 0;
    double mean = 0;
    double variance = 0;
    double std_error = 0;
    double min = 0;
    double max = 0;

    static TrialStats from(std::string metric, const RunningStats &s);
};

/// (mean - expected) / stderr. Zero when both the difference and stderr vanish.
double z_score(double mean, double expected, double stderr_of_mean);

}  // namespace clusterforge

#endif
