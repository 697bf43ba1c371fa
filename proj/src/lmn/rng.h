// Copyright 2026 The lmn Authors
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

#ifndef LMN_RNG_H_
#define LMN_RNG_H_

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace lmn {

/// splitmix64 finalizer; used only to turn structured keys into well-spread seeds.
constexpr uint64_t mix64(uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// A seedable pseudo-random stream. Streams are split by deriving child seeds
/// from a key path, so any trial can be replayed in isolation.
class RandomStream {
   public:
    explicit RandomStream(uint64_t seed) : seed_(seed), engine_(seed) {
    }

    /// Child stream keyed by an ordered list of integers.
    static RandomStream derive(uint64_t master_seed, std::initializer_list<uint64_t> keys) {
        uint64_t h = mix64(master_seed);
        for (uint64_t k : keys) {
            h = mix64(h ^ mix64(k + 0x632BE59BD9B4E019ULL));
        }
        return RandomStream(h);
    }

    RandomStream split(uint64_t key) const {
        return derive(seed_, {key});
    }

    uint64_t seed() const noexcept {
        return seed_;
    }

    uint64_t next_u64() {
        return engine_();
    }

    /// Uniform double in [0, 1) built from the top 53 bits; portable across
    /// standard libraries, unlike std::uniform_real_distribution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        if (p <= 0.0) {
            return false;
        }
        if (p >= 1.0) {
            return true;
        }
        return uniform() < p;
    }

   private:
    uint64_t seed_;
    std::mt19937_64 engine_;
};

inline uint64_t double_key(double x) noexcept {
    return std::bit_cast<uint64_t>(x);
}

}  // namespace lmn

#endif  // LMN_RNG_H_
