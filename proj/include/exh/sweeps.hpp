#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exh/prng.hpp"
#include "exh/rademacher.hpp"
#include "exh/sampling.hpp"
#include "exh/series.hpp"
#include "exh/submeasure.hpp"
#include "exh/tree.hpp"
#include "exh/witness.hpp"
#include "exh/zoo.hpp"

namespace exh {

// Property sweeps at acceptance scale. Each runs one batched check with a
// seeded stream and returns a small report; the CLI dispatches them and the
// acceptance suite asserts on them.

// ---------------------------------------------------------------------------
// Submeasure axioms

struct AxiomSweepReport {
    std::string preset;
    bool ok = true;
    std::string failed_axiom;
    std::uint64_t exhaustive_pairs = 0;
    std::uint64_t seeded_pairs = 0;
};

/// phi(empty) = 0, monotonicity and subadditivity: exhaustively on every pair
/// of subsets of the window, then on seeded pairs below the given bound.
/// The exhaustive leg caches one value per subset bitmask, so the pair loop
/// is three lookups and two comparisons.
inline AxiomSweepReport axiom_pair_sweep(const Submeasure& phi,
                                         std::span<const std::uint64_t> window,
                                         std::uint64_t seeded_pairs, std::uint64_t seeded_below,
                                         std::uint64_t seeded_max_size, Prng& rng) {
    AxiomSweepReport rep;
    rep.preset = phi.name();
    const std::size_t w = window.size();
    if (w > 20) throw std::invalid_argument("axiom_pair_sweep: window too wide");

    std::vector<Rational> vals;
    vals.reserve(std::size_t{1} << w);
    std::vector<std::uint64_t> subset;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w); ++mask) {
        subset.clear();
        for (std::size_t i = 0; i < w; ++i)
            if (mask & (std::uint64_t{1} << i)) subset.push_back(window[i]);
        vals.push_back(phi.eval_sorted(subset));
    }
    if (!vals[0].is_zero()) {
        rep.ok = false;
        rep.failed_axiom = "empty-set";
        return rep;
    }

    mpq_class sum;
    const std::uint64_t count = std::uint64_t{1} << w;
    for (std::uint64_t x = 0; x < count && rep.ok; ++x) {
        const mpq_class& fx = vals[x].raw();
        for (std::uint64_t y = 0; y < count; ++y) {
            const mpq_class& fu = vals[x | y].raw();
            if (fu < fx) {
                rep.ok = false;
                rep.failed_axiom = "monotonicity";
                break;
            }
            sum = fx + vals[y].raw();
            if (sum < fu) {
                rep.ok = false;
                rep.failed_axiom = "subadditivity";
                break;
            }
            ++rep.exhaustive_pairs;
        }
    }
    if (!rep.ok) return rep;

    std::vector<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> pairs;
    pairs.reserve(seeded_pairs);
    for (std::uint64_t i = 0; i < seeded_pairs; ++i)
        pairs.emplace_back(rng.subset(seeded_below, rng.below(seeded_max_size + 1)),
                           rng.subset(seeded_below, rng.below(seeded_max_size + 1)));
    auto check = check_axioms(phi, pairs);
    rep.seeded_pairs = check.pairs_checked;
    if (!check.ok) {
        rep.ok = false;
        rep.failed_axiom = check.failed_axiom;
    }
    return rep;
}

struct PresetSweepSpec {
    Submeasure phi;
    std::uint64_t seeded_below;
    std::uint64_t seeded_max_size;
};

/// The nine named presets with their seeded-sweep domains. The block
/// submeasure of the l1 sequence evaluates by per-block brute force, so its
/// seeded sets stay inside the first nine blocks; everything else samples
/// below 2^10.
inline std::vector<PresetSweepSpec> axiom_sweep_presets() {
    std::vector<PresetSweepSpec> out;
    out.push_back({harmonic_summable(), 1 << 10, 24});
    out.push_back({z_preset(), 1 << 10, 24});
    out.push_back({gdensity_uniform_width(2, Rational(1, 2), Rational(1)), 1 << 10, 24});
    out.push_back({empty_otimes_fin_submeasure(), 1 << 10, 24});
    out.push_back({farah_submeasure(), 1 << 10, 24});
    out.push_back({trace_null_submeasure(), 1 << 10, 24});
    out.push_back({tree_summable_submeasure(), 1 << 10, 24});
    out.push_back({tree_density_submeasure(), 1 << 10, 24});
    out.push_back({jr_submeasure(9), BlockLayout::p_start(9), 12});
    return out;
}

// ---------------------------------------------------------------------------
// Trace-null witness reproduction

struct TraceFamilyReport {
    std::uint32_t m = 0;
    bool per_set_ok = true;        // evaluator gives 2^-m on every materialized set
    bool unions_ok = true;         // popcount equals the closed form for every Y
    bool evaluator_union_ok = true;  // trace-null evaluator agrees on the full union
    bool summable_like_pass = false;
    std::uint64_t sets_checked = 0;
    std::uint64_t unions_checked = 0;
    Rational full_union_value;
};

/// Materializes the window-zero family as deep as the leaf-mask cap allows
/// and checks the per-set values and every union measure two ways: the
/// closed form (inclusion-exclusion over the independent system) against the
/// leaf-mask popcount, plus the antichain evaluator on the full union.
inline TraceFamilyReport trace_family_suite(std::uint32_t m) {
    TraceFamilyReport rep;
    rep.m = m;
    auto tn = trace_null_submeasure();
    auto fam = trace_null_witness_family(m);

    // The deepest materialized set fixes the mask depth, so the popcount leg
    // covers min(2^m, cap/m) sets; the closed form covers any size.
    const std::uint64_t sets =
        std::min<std::uint64_t>(LeafMask::kDepthCap / m, std::uint64_t{1} << m);
    const std::uint32_t depth = static_cast<std::uint32_t>(m * sets);
    Rational per_set = pow2_inv(m);

    std::vector<LeafMask> masks;
    std::vector<std::uint64_t> union_idx;
    for (std::uint64_t n = 0; n < sets; ++n) {
        auto en = fam.set_spec(n).enumerate_below(std::uint64_t{1} << 62,
                                                  std::uint64_t{1} << 24);
        if (!en.complete) throw BudgetExceeded("trace_family_suite: family set too large");
        rep.per_set_ok = rep.per_set_ok && tn.eval_sorted(en.elems) == per_set;
        ++rep.sets_checked;
        LeafMask mask(depth);
        for (auto idx : en.elems) mask.add_cylinder(node_at(idx));
        masks.push_back(std::move(mask));
        union_idx.insert(union_idx.end(), en.elems.begin(), en.elems.end());
    }

    for (std::uint64_t y = 1; y < (std::uint64_t{1} << sets); ++y) {
        LeafMask acc(depth);
        std::uint64_t j = 0;
        for (std::uint64_t n = 0; n < sets; ++n)
            if (y & (std::uint64_t{1} << n)) {
                acc |= masks[n];
                ++j;
            }
        rep.unions_ok = rep.unions_ok && acc.measure() == fam.trace_union_measure(j);
        ++rep.unions_checked;
    }

    std::sort(union_idx.begin(), union_idx.end());
    rep.full_union_value = fam.trace_union_measure(sets);
    rep.evaluator_union_ok = tn.eval_sorted(union_idx) == rep.full_union_value;

    rep.summable_like_pass = summable_like_check(tn, fam).pass;
    return rep;
}

// ---------------------------------------------------------------------------
// Representation identity

struct RepresentationSweepReport {
    bool ok = true;
    std::uint64_t submeasures = 0;
    std::uint64_t sets_checked = 0;
};

/// Seeded sup-of-measures submeasures against their sup-norm representation:
/// the norm of s_h(F) must equal phi(F) exactly, exhaustively on a small
/// window and on seeded sets over a wider one.
inline RepresentationSweepReport representation_identity_sweep(std::uint64_t submeasures,
                                                               std::uint64_t seeded_sets,
                                                               Prng& rng) {
    RepresentationSweepReport rep;
    for (std::uint64_t t = 0; t < submeasures && rep.ok; ++t) {
        auto phi = sup_of_measures(random_measure_list(rng, 8, 64, 8));
        auto h = ellinf_representation(phi);
        ++rep.submeasures;

        std::vector<std::uint64_t> f;
        for (std::uint32_t mask = 0; mask < (1u << 10); ++mask) {
            f.clear();
            for (std::uint64_t i = 0; i < 10; ++i)
                if (mask & (1u << i)) f.push_back(i);
            if (partial_sum(h, std::span<const std::uint64_t>(f)).norm() != phi.eval_sorted(f)) {
                rep.ok = false;
                break;
            }
            ++rep.sets_checked;
        }
        for (std::uint64_t s = 0; s < seeded_sets && rep.ok; ++s) {
            auto g = rng.subset(200, rng.below(17));
            if (partial_sum(h, std::span<const std::uint64_t>(g)).norm() != phi.eval_sorted(g)) {
                rep.ok = false;
                break;
            }
            ++rep.sets_checked;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Absolute-value comparison

struct AbsvalSweepReport {
    bool ok = true;
    std::uint64_t sequences = 0;
};

/// Seeded signed sup-norm sequences: the partial-sum norm is dominated by the
/// absolute-value sequence's, and some subset recovers at least a quarter of
/// the absolute norm. Exact, squared-free comparisons.
inline AbsvalSweepReport absval_sweep(std::uint64_t sequences, Prng& rng) {
    AbsvalSweepReport rep;
    for (std::uint64_t t = 0; t < sequences && rep.ok; ++t) {
        std::uint64_t indices = 1 + rng.below(12);
        auto h = random_signed_sequence(rng, indices, 1 + rng.below(4), NormTag::Sup);
        auto habs = absolute_value_sequence(h);
        std::vector<std::uint64_t> full(indices);
        for (std::uint64_t i = 0; i < indices; ++i) full[i] = i;
        std::span<const std::uint64_t> f(full);
        ++rep.sequences;

        Rational absnorm = partial_sum(habs, f).norm();
        if (partial_sum(h, f).norm() > absnorm) {
            rep.ok = false;
            break;
        }
        detail::SubsetNormSweep sweep(h, f);
        if (Rational(4) * sweep.run() < absnorm) rep.ok = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Envelope sandwich

struct EnvelopeSweepReport {
    bool ok = true;
    std::uint64_t sequences = 0;
    std::uint64_t sets_checked = 0;
};

/// Seeded signed sequences in both norms: the explicit envelope stays between
/// the induced submeasure and twice it, on every set of the universe.
inline EnvelopeSweepReport envelope_sweep(std::uint64_t sequences, Prng& rng) {
    std::vector<std::vector<std::uint64_t>> universe;
    for (std::uint32_t mask = 1; mask < 64; ++mask) {
        std::vector<std::uint64_t> f;
        for (std::uint64_t i = 0; i < 6; ++i)
            if (mask & (1u << i)) f.push_back(i);
        universe.push_back(std::move(f));
    }
    EnvelopeSweepReport rep;
    for (std::uint64_t t = 0; t < sequences && rep.ok; ++t) {
        NormTag tag = t % 2 == 0 ? NormTag::Sup : NormTag::Ell1;
        auto h = random_signed_sequence(rng, 6, 3, tag);
        auto psi = nonpathological_envelope(h, universe);
        auto phi = induced_submeasure(h, ModulusMode::Brute);
        ++rep.sequences;
        for (const auto& f : universe) {
            Rational tilde = phi.eval_sorted(f);
            Rational env = psi.eval_sorted(f);
            if (tilde > env || env > Rational(2) * tilde) {
                rep.ok = false;
                break;
            }
            ++rep.sets_checked;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Rademacher block suite

struct RademacherSuiteReport {
    bool table_ok = false;
    bool orthogonality_ok = false;
    bool norms_ok = false;
    bool sign_sweep_ok = false;
    bool khintchine_ok = false;
    std::uint64_t khintchine_tuples = 0;
    bool ok = false;
};

inline RademacherSuiteReport rademacher_suite(std::uint64_t khintchine_tuples, Prng& rng) {
    RademacherSuiteReport rep;

    // The displayed table: signs by blocks of halves, quarters, eighths.
    auto expect = [](std::uint64_t n, std::initializer_list<int> signs) {
        std::vector<std::pair<std::uint64_t, Rational>> es;
        std::uint64_t k = 0;
        for (int s : signs) es.emplace_back(k++, s > 0 ? pow2_inv(n) : -pow2_inv(n));
        return Vector(NormTag::Ell1, std::move(es));
    };
    rep.table_ok = rademacher_vector(0) == expect(0, {1}) &&
                   rademacher_vector(1) == expect(1, {1, 1}) &&
                   rademacher_vector(2) == expect(1, {1, -1}) &&
                   rademacher_vector(3) == expect(2, {1, 1, 1, 1}) &&
                   rademacher_vector(4) == expect(2, {1, 1, -1, -1}) &&
                   rademacher_vector(5) == expect(2, {1, -1, 1, -1}) &&
                   rademacher_vector(6) == expect(3, {1, 1, 1, 1, 1, 1, 1, 1}) &&
                   rademacher_vector(7) == expect(3, {1, 1, 1, 1, -1, -1, -1, -1}) &&
                   rademacher_vector(8) == expect(3, {1, 1, -1, -1, 1, 1, -1, -1}) &&
                   rademacher_vector(9) == expect(3, {1, -1, 1, -1, 1, -1, 1, -1});

    rep.orthogonality_ok = true;
    for (std::uint64_t n = 0; n <= 10 && rep.orthogonality_ok; ++n)
        for (std::uint64_t i = BlockLayout::p_start(n); i < BlockLayout::p_end(n); ++i) {
            const Vector ri = rademacher_vector(i);
            for (std::uint64_t j = i; j < BlockLayout::p_end(n); ++j) {
                const Vector rj = rademacher_vector(j);
                Rational dot(0);
                for (const auto& [k, v] : ri.entries()) dot += v * rj.coord(k);
                if (dot != (i == j ? pow2_inv(static_cast<unsigned long>(n)) : Rational(0))) {
                    rep.orthogonality_ok = false;
                    break;
                }
            }
        }

    rep.norms_ok = x_vector(0).norm() == Rational(1);
    for (std::uint64_t n = 1; n <= 12 && rep.norms_ok; ++n)
        for (std::uint64_t i = BlockLayout::p_start(n); i < BlockLayout::p_end(n); ++i)
            if (x_vector(i).norm() != Rational(1, static_cast<long>(n))) {
                rep.norms_ok = false;
                break;
            }

    rep.sign_sweep_ok = true;
    for (std::uint64_t n = 1; n <= 8 && rep.sign_sweep_ok; ++n) {
        Rational bound(static_cast<long>(n) + 1, static_cast<long>(n) * static_cast<long>(n));
        for (std::uint64_t pattern = 0; pattern < (std::uint64_t{2} << n); ++pattern) {
            Vector sum(NormTag::Ell1);
            for (std::uint64_t j = 0; j <= n; ++j) {
                Vector xi = x_vector(BlockLayout::p_start(n) + j);
                if (pattern & (std::uint64_t{1} << j)) {
                    std::vector<std::pair<std::uint64_t, Rational>> neg;
                    for (const auto& [k, v] : xi.entries()) neg.emplace_back(k, -v);
                    xi = Vector(NormTag::Ell1, std::move(neg));
                }
                sum += xi;
            }
            Rational norm = sum.norm();
            if (norm * norm > bound) {
                rep.sign_sweep_ok = false;
                break;
            }
        }
    }

    rep.khintchine_ok = true;
    for (std::uint64_t t = 0; t < khintchine_tuples; ++t) {
        std::uint64_t n = 1 + rng.below(8);
        std::vector<Rational> c;
        for (std::uint64_t j = 0; j <= n; ++j) c.push_back(random_signed_rational(rng));
        if (!khintchine_check(n, c).pass) {
            rep.khintchine_ok = false;
            break;
        }
        ++rep.khintchine_tuples;
    }

    rep.ok = rep.table_ok && rep.orthogonality_ok && rep.norms_ok && rep.sign_sweep_ok &&
             rep.khintchine_ok;
    return rep;
}

// ---------------------------------------------------------------------------
// Family-generated submeasure cross checks

struct PhiFamilyCrossReport {
    bool all_finite_ok = true;
    bool blocks_ok = true;
    bool antichains_exhaustive_ok = true;
    bool antichains_seeded_ok = true;
    bool capped_ok = true;
    bool ok = false;
};

inline PhiFamilyCrossReport phi_family_crosscheck(std::uint64_t seeded_sets, Prng& rng) {
    PhiFamilyCrossReport rep;

    auto all = phi_family_omega(MassRule::Harmonic{}, FamilySpec{FamilySpec::Kind::AllFinite});
    auto sum = harmonic_summable();
    for (std::uint64_t i = 0; i < seeded_sets && rep.all_finite_ok; ++i) {
        auto f = rng.subset(1 << 10, rng.below(17));
        rep.all_finite_ok = all.eval_sorted(f) == sum.eval_sorted(f);
    }

    auto blocks = phi_family_omega(MassRule::BlockConstDyadic{},
                                   FamilySpec{FamilySpec::Kind::OmegaBlocks, Partition::Dyadic});
    auto z = z_preset();
    for (std::uint64_t i = 0; i < seeded_sets && rep.blocks_ok; ++i) {
        auto f = rng.subset(1 << 10, rng.below(25));
        rep.blocks_ok = blocks.eval_sorted(f) == z.eval_sorted(f);
    }

    auto anti = phi_family_tree(TreeMassRule(TreeMassRule::Kind::LevelPow2Inv),
                                FamilySpec{FamilySpec::Kind::Antichains});
    auto tn = trace_null_submeasure();
    for (std::uint32_t mask = 1; mask < (1u << 15) && rep.antichains_exhaustive_ok; ++mask) {
        std::vector<std::uint64_t> f;
        for (std::uint64_t i = 0; i < 15; ++i)
            if (mask & (1u << i)) f.push_back(i);
        rep.antichains_exhaustive_ok = anti.eval_sorted(f) == tn.eval_sorted(f);
    }
    for (std::uint64_t i = 0; i < seeded_sets && rep.antichains_seeded_ok; ++i) {
        auto f = rng.subset(510, 1 + rng.below(25));
        rep.antichains_seeded_ok = anti.eval_sorted(f) == tn.eval_sorted(f);
    }

    auto capped = phi_family_tree(TreeMassRule(TreeMassRule::Kind::LevelInvSquare),
                                  FamilySpec{FamilySpec::Kind::CappedLevels});
    for (std::uint64_t i = 0; i < seeded_sets && rep.capped_ok; ++i) {
        auto f = rng.subset(510, 1 + rng.below(30));
        std::map<std::uint32_t, std::uint64_t> counts;
        for (auto idx : f) ++counts[node_at(idx).level];
        Rational expect(0);
        for (auto [l, c] : counts) {
            if (l == 0) continue;
            std::uint64_t cap = (std::uint64_t{1} << l) / l;
            expect += Rational(static_cast<long>(std::min(cap, c)),
                               static_cast<long>(l) * static_cast<long>(l));
        }
        rep.capped_ok = capped.eval_sorted(f) == expect;
    }

    rep.ok = rep.all_finite_ok && rep.blocks_ok && rep.antichains_exhaustive_ok &&
             rep.antichains_seeded_ok && rep.capped_ok;
    return rep;
}

// ---------------------------------------------------------------------------
// Bounded-columns pipeline

struct BoundedColumnsSweepReport {
    bool structure_ok = true;   // every support within two consecutive intervals
    bool domination_ok = true;  // sup_n phi_n <= sup_k nu_k on seeded sets
    std::uint64_t lists = 0;
    std::uint64_t sets_checked = 0;
    bool ok = false;
};

inline BoundedColumnsSweepReport bounded_columns_sweep(std::uint64_t lists,
                                                       std::uint64_t sets_per_list, Prng& rng) {
    BoundedColumnsSweepReport rep;
    for (std::uint64_t t = 0; t < lists; ++t) {
        auto measures = random_measure_list(rng, 6, 96, 10);
        auto res = bounded_columns_to_gdensity(measures);
        ++rep.lists;

        for (const auto& mu : measures) {
            if (mu.empty()) continue;
            bool placed = false;
            for (std::size_t i = 0; i + 1 < res.cuts.size() && !placed; ++i) {
                std::uint64_t lo = res.cuts[i];
                std::uint64_t hi = i + 2 < res.cuts.size() ? res.cuts[i + 2] : res.cuts[i + 1];
                placed = mu.min_support() >= lo && mu.max_support() < hi;
            }
            rep.structure_ok = rep.structure_ok && placed;
        }

        for (std::uint64_t s = 0; s < sets_per_list; ++s) {
            auto f = rng.subset(96, rng.below(16));
            Rational lhs = res.phi.eval_sorted(f);
            Rational rhs(0);
            for (const auto& mu : measures) rhs = max(rhs, mu.value(f));
            rep.domination_ok = rep.domination_ok && lhs <= rhs;
            ++rep.sets_checked;
        }
    }
    rep.ok = rep.structure_ok && rep.domination_ok;
    return rep;
}

} // namespace exh
