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


// Seeded generators for property tests.

#ifndef CLUSTERFORGE_TESTS_GENERATORS_H
#define CLUSTERFORGE_TESTS_GENERATORS_H

#include <cstdint>

#include "clusterforge/pauli_string.h"
#include "clusterforge/random.h"

namespace clusterforge::testing {

inline uint64_t below(RandomStream &rng, uint64_t n) {
    return rng() % n;
}

inline PauliString random_pauli(RandomStream &rng, size_t n) {
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    PauliString p(n);
    for (size_t q = 0; q < n; q++) {
        p.set(q, kLetters[below(rng, 4)]);
    }
    p.set_negative(rng.coin());
    return p;
}

/// Per-bit reference for the power of i picked up by P1 * P2 on one qubit.
inline int g_exponent(bool x1, bool z1, bool x2, bool z2) {
    if (!x1 && !z1) {
        return 0;
    }
    if (x1 && z1) {
        return int{z2} - int{x2};
    }
    if (x1) {
        return int{z2} * (2 * int{x2} - 1);
    }
    return int{x2} * (1 - 2 * int{z2});
}

}  // namespace clusterforge::testing

#endif
