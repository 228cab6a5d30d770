// Copyright 2026 The s17 Authors
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

#ifndef S17_RNG_HPP_
#define S17_RNG_HPP_

#include <cstdint>
#include <random>

namespace s17 {

/// Identifier written into dataset and model metadata. mt19937_64 output is
/// fixed by the C++ standard; the conversions below are ours, so the stream
/// is reproducible across platforms and standard libraries.
inline constexpr const char* kRngAlgorithm = "mt19937_64/u53+splitmix64";

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives an independent child seed from (base, stream).
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
    return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x5851F42D4C957F2Dull));
}

inline double u53_to_unit(uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Stateless uniform in [0,1) keyed by (key, counter).
inline double counter_uniform(uint64_t key, uint64_t counter) {
    return u53_to_unit(splitmix64(key ^ splitmix64(counter)));
}

class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    /// Uniform double in [0,1).
    double uniform() { return u53_to_unit(engine_()); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [lo, hi], unbiased (rejection sampling).
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<int64_t>(engine_());
        const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return lo + static_cast<int64_t>(x % span);
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace s17

#endif  // S17_RNG_HPP_
