#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace exh {

/// Deterministic PRNG for every seeded sweep in the library. The engine is
/// std::mt19937_64 (fully specified by the standard); bounded draws avoid the
/// standard distributions, whose output is implementation-defined.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : eng_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return eng_(); }

    /// Uniform in [0, n). Rejection sampling, so the result only depends on
    /// the engine's output stream.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return r % n;
    }

    /// Uniform in [lo, hi).
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo); }

    bool coin() { return (eng_() & 1) != 0; }

    /// Sorted duplicate-free subset of [0, window) with the given size.
    std::vector<std::uint64_t> subset(std::uint64_t window, std::uint64_t size) {
        if (size > window) size = window;
        std::vector<std::uint64_t> out;
        out.reserve(size);
        // Floyd's algorithm keeps the draw count equal to the subset size.
        for (std::uint64_t j = window - size; j < window; ++j) {
            std::uint64_t t = below(j + 1);
            bool seen = false;
            for (auto v : out) {
                if (v == t) {
                    seen = true;
                    break;
                }
            }
            out.push_back(seen ? j : t);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::mt19937_64 eng_;
    std::uint64_t seed_;
};

} // namespace exh
