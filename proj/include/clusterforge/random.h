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

#ifndef CLUSTERFORGE_RANDOM_H
#define CLUSTERFORGE_RANDOM_H

#include <cstdint>
#include <limits>

namespace clusterforge {

inline constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// The SplitMix64 finalizer. Bijective on 64-bit words.
constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of trial `index` in a run with master seed `seed`.
///
/// Fixed forever: trial_seed(seed, i) = mix64(seed ^ mix64(i + golden)). Rerunning
/// a single trial only needs the master seed and its index.
constexpr uint64_t trial_seed(uint64_t seed, uint64_t index) {
    return mix64(seed ^ mix64(index + kGoldenGamma));
}

/// Counter-based random stream (SplitMix64 over a keyed counter).
///
/// The n-th output depends only on (key, n), so a stream can be split into
/// independent children without sharing state. Satisfies UniformRandomBitGenerator.
class RandomStream {
   public:
    using result_type = uint64_t;

    explicit constexpr RandomStream(uint64_t key = 0) : key_(key) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    constexpr result_type operator()() {
        ++counter_;
        return mix64(key_ + counter_ * kGoldenGamma);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    bool coin() {
        return ((*this)() >> 63) != 0;
    }

    /// Independent child stream; children with distinct indices never overlap in practice.
    constexpr RandomStream split(uint64_t index) const {
        return RandomStream(mix64(key_ ^ mix64(index ^ 0xd1b54a32d192ed03ULL)));
    }

    constexpr uint64_t key() const {
        return key_;
    }
    constexpr uint64_t draws() const {
        return counter_;
    }

    friend constexpr bool operator==(const RandomStream &, const RandomStream &) = default;

   private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

/// Bernoulli(p) test against a precomputed 64-bit threshold; one stream draw per call.
class BernoulliGate {
   public:
    explicit BernoulliGate(double p);

    bool operator()(RandomStream &rng) const {
        uint64_t u = rng();
        return always_ || u < threshold_;
    }

    double p() const {
        return p_;
    }

   private:
    double p_;
    uint64_t threshold_;
    bool always_;
};

}  // namespace clusterforge

#endif
