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


#include "clusterforge/stats.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace clusterforge {

void RunningStats::add(double x) {
    count_++;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
}

double RunningStats::variance() const {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningStats::stderr_of_mean() const {
    return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

TrialStats TrialStats::from(std::string metric, const RunningStats &s) {
    TrialStats t;
    t.metric = std::move(metric);
    t.count = s.count();
    t.mean = s.mean();
    t.variance = s.variance();
    t.std_error = s.stderr_of_mean();
    t.min = s.count() ? s.min() : 0.0;
    t.max = s.count() ? s.max() : 0.0;
    return t;
}

double z_score(double mean, double expected, double stderr_of_mean) {
    double diff = mean - expected;
    if (stderr_of_mean == 0) {
        if (diff == 0) {
            return 0;
        }
        return diff > 0 ? INFINITY : -INFINITY;
    }
    return diff / stderr_of_mean;
}

}  // namespace clusterforge
