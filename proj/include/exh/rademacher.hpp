#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "exh/rational.hpp"
#include "exh/series.hpp"
#include "exh/setspec.hpp"
#include "exh/submeasure.hpp"
#include "exh/vectors.hpp"

namespace exh {

/// The two interval partitions behind the block-Rademacher construction:
/// P_n = [n(n+1)/2, (n+1)(n+2)/2) of width n+1, and Q_n = [2^n - 1, 2^{n+1} - 1)
/// of width 2^n.
struct BlockLayout {
    static std::uint64_t p_start(std::uint64_t n) { return n * (n + 1) / 2; }
    static std::uint64_t p_end(std::uint64_t n) { return p_start(n + 1); }
    static std::uint64_t q_start(std::uint64_t n) { return (std::uint64_t{1} << n) - 1; }
    static std::uint64_t q_end(std::uint64_t n) { return (std::uint64_t{2} << n) - 1; }

    static std::uint64_t p_block_of(std::uint64_t i) {
        auto b = partition_block_of(Partition::Triangle, i);
        return *b;
    }
};

/// The i-th block-Rademacher vector: for i in P_n with offset j, a vector in
/// R^{2^n} with entries +-2^{-n}; offset 0 is constant, offset j flips with
/// bit n-j of the coordinate. Matches the displayed table for i <= 9.
inline Vector rademacher_vector(std::uint64_t i) {
    std::uint64_t n = BlockLayout::p_block_of(i);
    std::uint64_t j = i - BlockLayout::p_start(n);
    Rational mag = pow2_inv(static_cast<unsigned long>(n));
    std::vector<std::pair<std::uint64_t, Rational>> es;
    es.reserve(std::uint64_t{1} << n);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
        bool flip = j > 0 && ((k >> (n - j)) & 1);
        es.emplace_back(k, flip ? -mag : mag);
    }
    return Vector(NormTag::Ell1, std::move(es));
}

/// The l1 sequence x: x_i lives on Q_n for i in P_n, carrying r_i scaled by
/// 1/n (1 for the n = 0 block, keeping it nontrivial).
inline Vector x_vector(std::uint64_t i) {
    std::uint64_t n = BlockLayout::p_block_of(i);
    Rational divisor = n == 0 ? Rational(1) : Rational(static_cast<long>(n));
    const Vector r = rademacher_vector(i);
    std::vector<std::pair<std::uint64_t, Rational>> es;
    es.reserve(r.entries().size());
    for (const auto& [k, v] : r.entries())
        es.emplace_back(BlockLayout::q_start(n) + k, v / divisor);
    return Vector(NormTag::Ell1, std::move(es));
}

inline VectorSequence x_sequence() {
    return VectorSequence(NormTag::Ell1, [](std::uint64_t i) { return x_vector(i); }, "x-seq");
}

namespace detail {

/// Max over nonempty F of the l1 norm of sum_{i in F} x_i, for indices inside
/// one P_n block; Gray-code sweep with an incrementally maintained norm.
inline Rational block_subset_max(std::uint64_t n, std::span<const std::uint64_t> indices) {
    if (indices.empty()) return Rational(0);
    if (indices.size() > 20)
        throw BudgetExceeded("jr block sweep: more than 20 indices in one block");
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<std::vector<Rational>> terms;  // dense over Q_n
    terms.reserve(indices.size());
    for (auto i : indices) {
        std::vector<Rational> dense(dim, Rational(0));
        const Vector x = x_vector(i);
        for (const auto& [k, v] : x.entries()) dense[k - BlockLayout::q_start(n)] = v;
        terms.push_back(std::move(dense));
    }
    std::vector<Rational> coords(dim, Rational(0));
    Rational norm(0), best(0);
    std::uint64_t gray = 0;
    for (std::uint64_t t = 1; t < (std::uint64_t{1} << indices.size()); ++t) {
        std::uint64_t next = t ^ (t >> 1);
        std::uint64_t flipped = static_cast<std::uint64_t>(std::countr_zero(gray ^ next));
        bool add = next & (std::uint64_t{1} << flipped);
        gray = next;
        for (std::uint64_t k = 0; k < dim; ++k) {
            const Rational& delta = terms[flipped][k];
            if (delta.is_zero()) continue;
            norm -= coords[k].abs();
            if (add) coords[k] += delta;
            else coords[k] -= delta;
            norm += coords[k].abs();
        }
        best = max(best, norm);
    }
    return best;
}

} // namespace detail

/// The block submeasure of the l1 sequence: phi(A) is the sum over blocks of
/// the best nonempty-subset norm within the block. Evaluation is restricted
/// to the first `block_cap` blocks (per-block brute force).
inline Submeasure jr_submeasure(std::uint64_t block_cap = 12) {
    if (block_cap == 0 || block_cap > 16)
        throw std::invalid_argument("jr_submeasure: block cap must be in [1, 16]");
    Provenance prov{Provenance::Kind::Preset, "jr", nullptr};
    auto eval = [block_cap](std::span<const std::uint64_t> f) {
        const std::uint64_t bound = BlockLayout::p_start(block_cap);
        Rational total(0);
        std::size_t i = 0;
        while (i < f.size()) {
            if (f[i] >= bound)
                throw std::invalid_argument("jr_submeasure: index beyond the block cap");
            std::uint64_t n = BlockLayout::p_block_of(f[i]);
            std::size_t j = i;
            while (j < f.size() && f[j] < BlockLayout::p_end(n)) ++j;
            total += detail::block_subset_max(n, f.subspan(i, j - i));
            i = j;
        }
        return total;
    };
    return Submeasure("jr", eval, prov);
}

/// A_X: the block indices meeting X, listed below the horizon.
inline SetSpec a_x_projection(const SetSpec& x, std::uint64_t block_horizon,
                              std::uint64_t budget = kDefaultEnumBudget) {
    auto en = x.enumerate_below(BlockLayout::p_start(block_horizon), budget);
    if (!en.complete) throw BudgetExceeded("a_x_projection: enumeration budget exceeded");
    std::vector<std::uint64_t> blocks;
    for (auto i : en.elems) {
        std::uint64_t n = BlockLayout::p_block_of(i);
        if (blocks.empty() || blocks.back() != n) blocks.push_back(n);
    }
    return SetSpec::explicit_set(std::move(blocks));
}

struct KhintchineReport {
    Rational l1_norm;
    Rational l1_norm_squared;
    Rational sum_of_squares;
    bool pass = false;  // l1_norm^2 <= sum of squares (constant 1, squared comparison)
};

/// Checks the norm of sum c_i r_i over P_n against the square-sum bound with
/// constant 1, comparing squares so everything stays rational.
inline KhintchineReport khintchine_check(std::uint64_t n, std::span<const Rational> coeffs) {
    if (coeffs.size() != n + 1)
        throw std::invalid_argument("khintchine_check: need exactly n + 1 coefficients");
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<Rational> sum(dim, Rational(0));
    for (std::uint64_t j = 0; j <= n; ++j) {
        if (coeffs[j].is_zero()) continue;
        const Vector r = rademacher_vector(BlockLayout::p_start(n) + j);
        for (const auto& [k, v] : r.entries()) sum[k] += coeffs[j] * v;
    }
    KhintchineReport rep;
    rep.l1_norm = Rational(0);
    for (const auto& c : sum) rep.l1_norm += c.abs();
    rep.l1_norm_squared = rep.l1_norm * rep.l1_norm;
    rep.sum_of_squares = Rational(0);
    for (const auto& c : coeffs) rep.sum_of_squares += c * c;
    rep.pass = rep.l1_norm_squared <= rep.sum_of_squares;
    return rep;
}

} // namespace exh
