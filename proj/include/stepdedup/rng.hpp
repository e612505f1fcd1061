// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <cstdint>

namespace stepdedup {

/// Small deterministic PRNG (splitmix64). Used instead of <random>
/// distributions so that seeded results are identical across platforms
/// and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) return 0;
        while (true) {
            std::uint64_t x = next();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= (0ULL - n) % n) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Independent stream derived from a base seed; stream splits are
    /// what make parallel and sequential bootstrap runs agree.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_index) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream_index + 1)));
        return Rng(mix.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace stepdedup
