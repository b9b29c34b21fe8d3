#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "exh/mass.hpp"
#include "exh/measure.hpp"
#include "exh/rational.hpp"
#include "exh/setspec.hpp"
#include "exh/submeasure.hpp"
#include "exh/tails.hpp"
#include "exh/tree.hpp"

namespace exh {

/// Summable submeasure: F maps to the h-mass of F. Carries the mass rule's
/// tail certificates.
inline Submeasure summable_submeasure(MassRule h) {
    Provenance prov{Provenance::Kind::Preset, "summable(" + h.name() + ")", nullptr};
    auto eval = [h](std::span<const std::uint64_t> f) {
        Rational s(0);
        for (auto n : f) s += h.at(n);
        return s;
    };
    auto cert = [h](const SetSpec& a, std::uint64_t from) { return h.tail_bound_on(a, from); };
    return Submeasure("summable(" + h.name() + ")", eval, prov, cert);
}

inline Submeasure harmonic_summable() { return summable_submeasure(MassRule::Harmonic{}); }

/// The density-zero submeasure: mu_b is uniform with weight 2^-b on the
/// dyadic block [2^b, 2^{b+1}), and the value is the sup of the mu_b.
inline Submeasure z_preset() {
    auto access = std::make_shared<ColumnAccess>();
    access->columns_at = [](std::uint64_t n) {
        std::vector<std::pair<std::uint64_t, Rational>> out;
        if (n >= 1) {
            std::uint32_t b = static_cast<std::uint32_t>(std::bit_width(n) - 1);
            out.emplace_back(b, pow2_inv(b));
        }
        return out;
    };
    Provenance prov{Provenance::Kind::GeneralizedDensity, "Z", access};
    auto eval = [](std::span<const std::uint64_t> f) {
        Rational best(0);
        std::size_t i = 0;
        while (i < f.size()) {
            if (f[i] == 0) {
                ++i;
                continue;
            }
            std::uint32_t b = static_cast<std::uint32_t>(std::bit_width(f[i]) - 1);
            std::uint64_t count = 0;
            while (i < f.size() && f[i] < (std::uint64_t{2} << b)) {
                ++count;
                ++i;
            }
            best = max(best, Rational(Rational::from_uint64(count).numerator()) * pow2_inv(b));
        }
        return best;
    };
    return Submeasure("Z", eval, prov);
}

/// Density submeasure from an explicit list of measures with pairwise
/// disjoint finite supports: F maps to max_n mu_n(F).
inline Submeasure density_submeasure(std::vector<FiniteSupportMeasure> measures) {
    for (std::size_t i = 0; i < measures.size(); ++i)
        for (std::size_t j = i + 1; j < measures.size(); ++j)
            if (measures[i].supports_overlap(measures[j]))
                throw std::invalid_argument("density_submeasure: supports must be pairwise disjoint");
    auto cols = std::make_shared<const std::vector<FiniteSupportMeasure>>(std::move(measures));
    auto access = std::make_shared<ColumnAccess>();
    access->column_count = cols->size();
    access->columns = cols;
    access->columns_at = [cols](std::uint64_t n) {
        std::vector<std::pair<std::uint64_t, Rational>> out;
        for (std::uint64_t k = 0; k < cols->size(); ++k) {
            Rational w = (*cols)[k].at(n);
            if (!w.is_zero()) out.emplace_back(k, w);
        }
        return out;
    };
    Provenance prov{Provenance::Kind::GeneralizedDensity, "density", access};
    auto eval = [cols](std::span<const std::uint64_t> f) {
        Rational best(0);
        for (const auto& mu : *cols) best = max(best, mu.value(f));
        return best;
    };
    return Submeasure("density", eval, prov);
}

/// Generalized density submeasure with uniform-width blocks and capped
/// counting blocks: phi_n(F) = min(|F within block n| * scale, cap).
inline Submeasure gdensity_uniform_width(std::uint64_t width, const Rational& scale,
                                         const Rational& cap) {
    if (width == 0) throw std::invalid_argument("gdensity: width must be positive");
    Provenance prov{Provenance::Kind::GeneralizedDensity, "gdensity-uniform-width", nullptr};
    auto eval = [width, scale, cap](std::span<const std::uint64_t> f) {
        Rational best(0);
        std::size_t i = 0;
        while (i < f.size()) {
            std::uint64_t block = f[i] / width;
            std::uint64_t count = 0;
            while (i < f.size() && f[i] / width == block) {
                ++count;
                ++i;
            }
            Rational v = Rational(Rational::from_uint64(count).numerator()) * scale;
            best = max(best, min(v, cap));
        }
        return best;
    };
    return Submeasure("gdensity-uniform-width", eval, prov);
}

/// Generalized density submeasure from explicit blocks: disjoint intervals
/// P_n, each carrying its own evaluator restricted to the interval.
struct GDensityBlock {
    std::pair<std::uint64_t, std::uint64_t> interval;  // [a, b)
    Submeasure::Evaluator eval;                        // applied to F within the interval
};

inline Submeasure gdensity_from_blocks(std::vector<GDensityBlock> blocks, std::string name) {
    auto shared = std::make_shared<const std::vector<GDensityBlock>>(std::move(blocks));
    Provenance prov{Provenance::Kind::GeneralizedDensity, name, nullptr};
    auto eval = [shared](std::span<const std::uint64_t> f) {
        Rational best(0);
        for (const auto& blk : *shared) {
            auto lo = std::lower_bound(f.begin(), f.end(), blk.interval.first);
            auto hi = std::lower_bound(f.begin(), f.end(), blk.interval.second);
            if (lo == hi) continue;
            std::span<const std::uint64_t> part(f.data() + (lo - f.begin()),
                                                static_cast<std::size_t>(hi - lo));
            best = max(best, blk.eval(part));
        }
        return best;
    };
    return Submeasure(std::move(name), eval, prov);
}

/// Cantor diagonal pairing, the canonical enumeration of omega x omega.
inline std::uint64_t cantor_pair(std::uint64_t n, std::uint64_t m) {
    std::uint64_t w = n + m;
    return w * (w + 1) / 2 + m;
}

inline std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t p) {
    std::uint64_t w = 0;
    // Largest w with w(w+1)/2 <= p.
    std::uint64_t t = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(p) + 1.0) - 1.0) / 2.0);
    w = t;
    while ((w + 1) * (w + 2) / 2 <= p) ++w;
    while (w > 0 && w * (w + 1) / 2 > p) --w;
    std::uint64_t m = p - w * (w + 1) / 2;
    return {w - m, m};
}

/// The Fubini product of the trivial ideal with Fin, as a density submeasure
/// over pair codes: the atom at (n, m) weighs 1/(n+1).
inline Submeasure empty_otimes_fin_submeasure() {
    auto access = std::make_shared<ColumnAccess>();
    access->columns_at = [](std::uint64_t p) {
        auto [n, m] = cantor_unpair(p);
        (void)m;
        std::vector<std::pair<std::uint64_t, Rational>> out;
        out.emplace_back(p, Rational(1, static_cast<long>(n + 1)));
        return out;
    };
    Provenance prov{Provenance::Kind::GeneralizedDensity, "empty-otimes-fin", access};
    auto eval = [](std::span<const std::uint64_t> f) {
        Rational best(0);
        for (auto p : f) {
            auto [n, m] = cantor_unpair(p);
            (void)m;
            best = max(best, Rational(1, static_cast<long>(n + 1)));
        }
        return best;
    };
    return Submeasure("empty-otimes-fin", eval, prov);
}

/// Farah's submeasure: sum over b >= 1 of min{b, |F within [2^b, 2^{b+1})|} / b^2.
inline Submeasure farah_submeasure() {
    Provenance prov{Provenance::Kind::Preset, "farah", nullptr};
    auto eval = [](std::span<const std::uint64_t> f) {
        Rational s(0);
        std::size_t i = 0;
        while (i < f.size()) {
            if (f[i] < 2) {  // points 0 and 1 sit below block 1 and contribute nothing
                ++i;
                continue;
            }
            std::uint64_t b = static_cast<std::uint64_t>(std::bit_width(f[i]) - 1);
            std::uint64_t end = std::uint64_t{1} << (b + 1);
            std::uint64_t count = 0;
            while (i < f.size() && f[i] < end) {
                ++count;
                ++i;
            }
            std::uint64_t clipped = std::min<std::uint64_t>(b, count);
            s += Rational(static_cast<long>(clipped), static_cast<long>(b * b));
        }
        return s;
    };
    return Submeasure("farah", eval, prov);
}

namespace detail {

/// Exact sum of 2^{-level} over a node set, via one integer accumulation per
/// level count.
inline Rational dyadic_level_sum(const std::vector<TreeNode>& nodes) {
    if (nodes.empty()) return Rational(0);
    std::map<std::uint32_t, std::uint64_t> level_counts;
    std::uint32_t max_level = 0;
    for (const auto& s : nodes) {
        ++level_counts[s.level];
        max_level = std::max(max_level, s.level);
    }
    mpz_class num(0);
    for (const auto& [l, c] : level_counts) {
        mpz_class term;
        mpz_ui_pow_ui(term.get_mpz_t(), 2, max_level - l);
        num += term * Rational::from_uint64(c).numerator();
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, max_level);
    return Rational(num, den);
}

inline std::vector<TreeNode> nodes_of(std::span<const std::uint64_t> f) {
    std::vector<TreeNode> nodes;
    nodes.reserve(f.size());
    for (auto idx : f) nodes.push_back(node_at(idx));
    return nodes;
}

} // namespace detail

/// Trace-null submeasure on tree-node sets: the antichain supremum of the
/// dyadic weight, attained by the prefix-minimal elements.
inline Submeasure trace_null_submeasure() {
    Provenance prov{Provenance::Kind::Preset, "trace-null", nullptr};
    auto eval = [](std::span<const std::uint64_t> f) {
        auto nodes = detail::nodes_of(f);
        return detail::dyadic_level_sum(minimal_antichain(nodes));
    };
    return Submeasure("trace-null", eval, prov);
}

/// Tree version of the summable ideal: total dyadic weight of the node set.
inline Submeasure tree_summable_submeasure() {
    Provenance prov{Provenance::Kind::Preset, "tree-summable", nullptr};
    auto eval = [](std::span<const std::uint64_t> f) {
        return detail::dyadic_level_sum(detail::nodes_of(f));
    };
    return Submeasure("tree-summable", eval, prov);
}

/// Tree version of the density-zero ideal: max over levels of the level-count
/// scaled by 2^{-level}.
inline Submeasure tree_density_submeasure() {
    Provenance prov{Provenance::Kind::Preset, "tree-density", nullptr};
    auto eval = [](std::span<const std::uint64_t> f) {
        Rational best(0);
        std::size_t i = 0;
        while (i < f.size()) {
            TreeNode s = node_at(f[i]);
            std::uint64_t count = 0;
            std::uint64_t level_end = (std::uint64_t{1} << (s.level + 1)) - 1;
            while (i < f.size() && f[i] < level_end) {
                ++count;
                ++i;
            }
            best = max(best,
                       Rational(Rational::from_uint64(count).numerator()) * pow2_inv(s.level));
        }
        return best;
    };
    return Submeasure("tree-density", eval, prov);
}

/// The canonical partition piece X_k = {n : n = 2^k - 1 mod 2^{k+1}} whose
/// harmonic subsum diverges; used to intersect countably many summable ideals.
inline SetSpec j0_piece(std::uint32_t k) {
    return SetSpec::arithmetic((std::uint64_t{1} << k) - 1, std::uint64_t{1} << (k + 1));
}

inline MassRule j0_mass(std::uint32_t k) { return MassRule::ResidueHarmonic{k}; }

struct IntersectionProfile {
    std::vector<TailMatrix> coordinates;
    std::vector<MembershipVerdict> verdicts;
    enum class Joint { AllTailsBelow, SomeDivergence, Inconclusive } joint = Joint::Inconclusive;
};

/// Coordinatewise tail profile of A against a finite list of summable
/// coordinates; A belongs to the intersection ideal iff every coordinate
/// vanishes, so the verdicts are reported jointly.
inline IntersectionProfile intersection_profile(const std::vector<MassRule>& rules,
                                                const SetSpec& a, const Rational& epsilon,
                                                std::uint64_t horizon, VerdictOptions opts = {}) {
    IntersectionProfile out;
    bool all_below = true, some_diverging = false;
    for (const auto& h : rules) {
        Submeasure phi = summable_submeasure(h);
        MembershipVerdict v = exh_verdict(phi, a, epsilon, horizon, opts);
        out.coordinates.push_back(v.evidence);
        all_below = all_below && v.status == MembershipVerdict::Status::TailBelow;
        some_diverging = some_diverging || v.status == MembershipVerdict::Status::LowerBoundWitness;
        out.verdicts.push_back(std::move(v));
    }
    if (some_diverging) out.joint = IntersectionProfile::Joint::SomeDivergence;
    else if (all_below) out.joint = IntersectionProfile::Joint::AllTailsBelow;
    return out;
}

} // namespace exh
