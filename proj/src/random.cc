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

#include "clusterforge/random.h"

#include <cmath>
#include <stdexcept>

namespace clusterforge {

BernoulliGate::BernoulliGate(double p) : p_(p), threshold_(0), always_(false) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("Bernoulli probability must lie in [0, 1].");
    }
    if (p >= 1.0) {
        always_ = true;
    } else {
        // p * 2^64, exact for the dyadic probabilities used in tests.
        threshold_ = static_cast<uint64_t>(std::ldexp(p, 64));
    }
}

}  // namespace clusterforge
