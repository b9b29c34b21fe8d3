#pragma once

#include <cstdint>
#include <vector>

#include "exh/measure.hpp"
#include "exh/prng.hpp"
#include "exh/rational.hpp"
#include "exh/series.hpp"
#include "exh/submeasure.hpp"
#include "exh/vectors.hpp"

namespace exh {

/// Random p/q with 1 <= p <= max_num, 1 <= q <= max_den.
inline Rational random_positive_rational(Prng& rng, std::uint64_t max_num = 16,
                                         std::uint64_t max_den = 16) {
    long p = static_cast<long>(1 + rng.below(max_num));
    long q = static_cast<long>(1 + rng.below(max_den));
    return Rational(p, q);
}

inline Rational random_signed_rational(Prng& rng, std::uint64_t max_num = 8,
                                       std::uint64_t max_den = 8) {
    Rational r = random_positive_rational(rng, max_num, max_den);
    return rng.coin() ? r : -r;
}

/// Measure with 1..max_atoms atoms inside [0, window).
inline FiniteSupportMeasure random_measure(Prng& rng, std::uint64_t window,
                                           std::uint64_t max_atoms) {
    auto support = rng.subset(window, 1 + rng.below(max_atoms));
    std::vector<std::pair<std::uint64_t, Rational>> atoms;
    atoms.reserve(support.size());
    for (auto n : support) atoms.emplace_back(n, random_positive_rational(rng));
    return FiniteSupportMeasure(std::move(atoms));
}

inline std::vector<FiniteSupportMeasure> random_measure_list(Prng& rng, std::uint64_t max_columns,
                                                             std::uint64_t window,
                                                             std::uint64_t max_atoms) {
    std::vector<FiniteSupportMeasure> out;
    std::uint64_t n = 1 + rng.below(max_columns);
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(random_measure(rng, window, max_atoms));
    return out;
}

/// Signed sequence with `indices` explicit terms over coordinates [0, coords);
/// each coordinate of each term is present with probability 1/2.
inline VectorSequence random_signed_sequence(Prng& rng, std::uint64_t indices,
                                             std::uint64_t coords, NormTag tag) {
    std::vector<Vector> terms;
    terms.reserve(indices);
    for (std::uint64_t n = 0; n < indices; ++n) {
        std::vector<std::pair<std::uint64_t, Rational>> es;
        for (std::uint64_t k = 0; k < coords; ++k)
            if (rng.coin()) es.emplace_back(k, random_signed_rational(rng));
        terms.emplace_back(tag, std::move(es));
    }
    return explicit_sequence(tag, std::move(terms), "seeded-signed");
}

} // namespace exh
