#include <catch2/catch_amalgamated.hpp>

#include "exh/sampling.hpp"
#include "exh/series.hpp"

using namespace exh;

namespace {

// Independent subset-max oracle: plain bitmask loop with from-scratch sums,
// no incremental state shared with the library sweep.
Rational oracle_subset_max(const VectorSequence& h, const std::vector<std::uint64_t>& idx) {
    REQUIRE(idx.size() <= 16);
    Rational best(0);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << idx.size()); ++mask) {
        std::vector<std::uint64_t> sub;
        for (std::size_t i = 0; i < idx.size(); ++i)
            if (mask & (std::uint32_t{1} << i)) sub.push_back(idx[i]);
        best = max(best, partial_sum(h, std::span<const std::uint64_t>(sub)).norm());
    }
    return best;
}

} // namespace

TEST_CASE("partial sums of the density representation sequence") {
    auto h = zinc0_sequence();
    // The block [2, 4) sums to e_1.
    Vector s = partial_sum(h, SetSpec::intervals({{2, 4}}));
    CHECK(s == Vector(NormTag::Sup, {{1, Rational(1)}}));
    CHECK(s.norm().str() == "1");

    CHECK(partial_sum(h, SetSpec::empty()).is_zero());

    Vector single = partial_sum(h, SetSpec::explicit_set({2}));
    CHECK(single == Vector(NormTag::Sup, {{1, Rational(1, 2)}}));
    CHECK(single.norm().str() == "1/2");
}

TEST_CASE("absolute value sequence") {
    auto h = explicit_sequence(NormTag::Sup,
                               {Vector(NormTag::Sup, {{0, Rational(1)}, {1, Rational(-1)}})});
    auto habs = absolute_value_sequence(h);
    CHECK(habs.at(0) == Vector(NormTag::Sup, {{0, Rational(1)}, {1, Rational(1)}}));

    auto nonneg = zinc0_sequence();
    auto nabs = absolute_value_sequence(nonneg);
    for (std::uint64_t n = 0; n < 40; ++n) CHECK(nabs.at(n) == nonneg.at(n));
}

TEST_CASE("monotone domination and the quarter bound") {
    // The norm of s_h(F) never exceeds that of the absolute-value sequence,
    // and for sup-norm sequences a subset recovers at least a quarter of it.
    Prng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        NormTag tag = trial % 2 == 0 ? NormTag::Sup : NormTag::Ell1;
        std::uint64_t indices = 1 + rng.below(10);
        auto h = random_signed_sequence(rng, indices, 1 + rng.below(4), tag);
        auto habs = absolute_value_sequence(h);
        std::vector<std::uint64_t> full(indices);
        for (std::uint64_t i = 0; i < indices; ++i) full[i] = i;
        std::span<const std::uint64_t> f(full);

        CHECK(partial_sum(h, f).norm() <= partial_sum(habs, f).norm());

        if (tag == NormTag::Sup) {
            detail::SubsetNormSweep sweep(h, f);
            Rational best = sweep.run();
            CHECK(Rational(4) * best >= partial_sum(habs, f).norm());
        }
    }
}

TEST_CASE("cauchy modulus: closed form, brute force, and the oracle agree") {
    Prng rng(22);
    for (int trial = 0; trial < 60; ++trial) {
        // Nonnegative sequences: closed form is exact, brute must match.
        std::uint64_t indices = 1 + rng.below(12);
        NormTag tag = trial % 2 == 0 ? NormTag::Sup : NormTag::Ell1;
        std::vector<Vector> terms;
        for (std::uint64_t n = 0; n < indices; ++n) {
            std::vector<std::pair<std::uint64_t, Rational>> es;
            for (std::uint64_t k = 0; k < 3; ++k)
                if (rng.coin()) es.emplace_back(k, random_positive_rational(rng, 8, 8));
            terms.emplace_back(tag, std::move(es));
        }
        auto h = explicit_sequence(tag, std::move(terms));
        auto window = SetSpec::intervals({{0, indices}});
        Rational closed = cauchy_modulus(h, window, 0, indices, ModulusMode::ClosedForm);
        Rational brute = cauchy_modulus(h, window, 0, indices, ModulusMode::Brute);
        CHECK(closed == brute);

        std::vector<std::uint64_t> idx(indices);
        for (std::uint64_t i = 0; i < indices; ++i) idx[i] = i;
        CHECK(brute == oracle_subset_max(h, idx));
    }
}

TEST_CASE("cauchy modulus: edge cases and contract errors") {
    auto h = explicit_sequence(
        NormTag::Sup, {Vector(NormTag::Sup, {{0, Rational(1)}}),
                       Vector(NormTag::Sup, {{0, Rational(-1)}})});

    // Empty window.
    CHECK(cauchy_modulus(h, SetSpec::empty(), 0, 10, ModulusMode::Brute).is_zero());

    // Signed pair: the modulus is attained at a singleton.
    CHECK(cauchy_modulus(h, SetSpec::intervals({{0, 2}}), 0, 2, ModulusMode::Brute).str() == "1");

    // Closed form on a signed sequence is rejected.
    CHECK_THROWS_AS(cauchy_modulus(h, SetSpec::intervals({{0, 2}}), 0, 2, ModulusMode::ClosedForm),
                    std::invalid_argument);

    // Windows above the brute cap are rejected.
    auto big = zinc0_sequence();
    CHECK_THROWS_AS(cauchy_modulus(big, SetSpec::arithmetic(0, 1), 0, 64, ModulusMode::Brute),
                    BudgetExceeded);
}

TEST_CASE("induced submeasure") {
    auto h = zinc0_sequence();
    auto phi = induced_submeasure(h, ModulusMode::ClosedForm);

    // Whole dyadic blocks sum to a basis vector of norm one.
    for (std::uint32_t k = 0; k <= 10; ++k)
        CHECK(phi.eval_set(SetSpec::intervals(
                               {{std::uint64_t{1} << k, std::uint64_t{1} << (k + 1)}}))
                  .str() == "1");
    CHECK(phi.eval_set(SetSpec::empty()).is_zero());

    // Induced submeasures satisfy the submeasure axioms.
    Prng rng(23);
    std::vector<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> pairs;
    for (int i = 0; i < 100; ++i)
        pairs.emplace_back(rng.subset(64, rng.below(8)), rng.subset(64, rng.below(8)));
    CHECK(check_axioms(phi, pairs).ok);

    auto hs = random_signed_sequence(rng, 10, 3, NormTag::Sup);
    CHECK(check_axioms(induced_submeasure(hs, ModulusMode::Brute), pairs).ok);
}

TEST_CASE("basic sup-norm representation recovers the submeasure exactly") {
    auto mu0 = FiniteSupportMeasure({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
    auto mu1 = FiniteSupportMeasure({{2, Rational(1)}});
    auto phi = sup_of_measures({mu0, mu1});
    auto h = ellinf_representation(phi);

    CHECK(h.at(0) == Vector(NormTag::Sup, {{0, Rational(1, 2)}}));
    CHECK(h.at(2) == Vector(NormTag::Sup, {{1, Rational(1)}}));
    Vector s = partial_sum(h, SetSpec::explicit_set({0, 2}));
    CHECK(s.norm().str() == "1");
    CHECK(s.norm() == phi.eval_set(SetSpec::explicit_set({0, 2})));

    // A single measure represents itself.
    auto single = sup_of_measures({mu0});
    auto hs = ellinf_representation(single);
    for (std::uint64_t n = 0; n < 4; ++n)
        CHECK(hs.at(n).norm() == mu0.at(n));

    // The density preset's column family regenerates the block sequence.
    auto z = ellinf_representation(z_preset());
    auto zh = zinc0_sequence();
    for (std::uint64_t n = 0; n < 128; ++n) CHECK(z.at(n) == zh.at(n));

    CHECK_THROWS_AS(ellinf_representation(farah_submeasure()), std::invalid_argument);
}

TEST_CASE("normal form thresholds") {
    auto z = zinc0_sequence();
    auto nf = c0_normal_form(z);
    for (std::uint64_t n = 0; n < 200; ++n) CHECK(nf.at(n) == z.at(n));

    auto zero = explicit_sequence(NormTag::Sup, {});
    CHECK(c0_normal_form(zero).at(5).is_zero());

    auto dense = dense_tail_sequence(8);
    for (std::uint64_t n = 0; n < 20; ++n) CHECK(c0_normal_form(dense).at(n).is_zero());

    auto l1 = explicit_sequence(NormTag::Ell1, {});
    CHECK_THROWS_AS(c0_normal_form(l1), std::invalid_argument);
}

TEST_CASE("column finiteness profile") {
    // Materialized density columns: every point of [1, 64) lands in exactly
    // one column support.
    std::vector<FiniteSupportMeasure> cols;
    for (std::uint32_t b = 0; b < 6; ++b) {
        std::vector<std::pair<std::uint64_t, Rational>> atoms;
        for (std::uint64_t x = std::uint64_t{1} << b; x < (std::uint64_t{2} << b); ++x)
            atoms.emplace_back(x, pow2_inv(b));
        cols.emplace_back(std::move(atoms));
    }
    auto rep = column_finiteness_check(cols, 64);
    CHECK(rep.max_multiplicity == 1);
    CHECK(rep.hits[0].empty());
    for (std::uint64_t m = 1; m < 64; ++m) CHECK(rep.hits[m].size() == 1);

    CHECK(column_finiteness_check({}, 16).max_multiplicity == 0);

    auto overlap = column_finiteness_check(
        {FiniteSupportMeasure({{3, Rational(1)}}), FiniteSupportMeasure({{3, Rational(1, 2)}})},
        8);
    CHECK(overlap.max_multiplicity == 2);
    CHECK(overlap.hits[3] == std::vector<std::uint64_t>{0, 1});
}

TEST_CASE("bounded columns: greedy interval partition") {
    // Supports {0,1}, {1,2,3}, {5}: running the stated greedy rule by hand
    // gives cuts 0,1,2,4,5,6.
    auto res = bounded_columns_to_gdensity(
        {FiniteSupportMeasure({{0, Rational(1)}, {1, Rational(1)}}),
         FiniteSupportMeasure({{1, Rational(1)}, {2, Rational(1)}, {3, Rational(1)}}),
         FiniteSupportMeasure({{5, Rational(1)}})});
    CHECK(res.cuts == std::vector<std::uint64_t>{0, 1, 2, 4, 5, 6});

    // Pairwise-disjoint single-interval supports land in single intervals.
    auto res2 = bounded_columns_to_gdensity(
        {FiniteSupportMeasure({{0, Rational(1)}, {1, Rational(1)}}),
         FiniteSupportMeasure({{4, Rational(1)}, {5, Rational(1)}})});
    for (std::size_t k = 0; k < 2; ++k) {
        std::uint64_t lo = k == 0 ? 0 : 4, hi = lo + 2;
        std::size_t covering = 0;
        for (auto [a, b] : res2.intervals)
            if (a < hi && lo < b) ++covering;
        CHECK(covering <= 2);
    }

    CHECK_THROWS_AS(bounded_columns_to_gdensity({}), std::invalid_argument);
}

TEST_CASE("bounded columns: structural invariant and domination, seeded") {
    Prng rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        auto measures = random_measure_list(rng, 6, 64, 8);
        auto res = bounded_columns_to_gdensity(measures);

        // Every support sits inside two consecutive intervals.
        for (const auto& mu : measures) {
            if (mu.empty()) continue;
            bool placed = false;
            for (std::size_t i = 0; i + 1 < res.cuts.size() && !placed; ++i) {
                std::uint64_t lo = res.cuts[i];
                std::uint64_t hi = i + 2 < res.cuts.size() ? res.cuts[i + 2] : res.cuts[i + 1];
                placed = mu.min_support() >= lo && mu.max_support() < hi;
            }
            CHECK(placed);
        }

        // sup_n phi_n(A) <= sup_k nu_k(A).
        for (int s = 0; s < 20; ++s) {
            auto f = rng.subset(64, rng.below(12));
            Rational lhs = res.phi.eval_sorted(f);
            Rational rhs(0);
            for (const auto& mu : measures) rhs = max(rhs, mu.value(f));
            CHECK(lhs <= rhs);
        }
    }
}

TEST_CASE("dual witness functionals") {
    Vector v(NormTag::Ell1, {{0, Rational(1)}, {1, Rational(-2)}});
    auto f = dual_witness(v);
    CHECK(f.apply(v).str() == "3");
    CHECK(f.apply(v) == v.norm());

    Vector ek(NormTag::Sup, {{4, Rational(1)}});
    auto g = dual_witness(ek);
    CHECK(g.apply(ek).str() == "1");
    REQUIRE(g.weights().size() == 1);
    CHECK(g.weights()[0].first == 4);

    CHECK_THROWS_AS(dual_witness(Vector(NormTag::Sup)), std::invalid_argument);

    // Norm-one bound |f(w)| <= norm(w) on seeded vectors.
    Prng rng(31);
    for (int i = 0; i < 200; ++i) {
        NormTag tag = i % 2 == 0 ? NormTag::Sup : NormTag::Ell1;
        std::vector<std::pair<std::uint64_t, Rational>> es;
        for (std::uint64_t k = 0; k < 5; ++k)
            if (rng.coin()) es.emplace_back(k, random_signed_rational(rng));
        Vector w(tag, std::move(es));
        if (w.is_zero()) continue;
        auto fn = dual_witness(w);
        for (int j = 0; j < 10; ++j) {
            std::vector<std::pair<std::uint64_t, Rational>> ws;
            for (std::uint64_t k = 0; k < 5; ++k)
                if (rng.coin()) ws.emplace_back(k, random_signed_rational(rng));
            Vector u(tag, std::move(ws));
            CHECK(fn.apply(u).abs() <= u.norm());
        }
    }
}

TEST_CASE("envelope: equality for nonnegative sequences, sandwich for signed ones") {
    // Universe: all subsets of [0, 6).
    std::vector<std::vector<std::uint64_t>> universe;
    for (std::uint32_t mask = 1; mask < 64; ++mask) {
        std::vector<std::uint64_t> f;
        for (std::uint64_t i = 0; i < 6; ++i)
            if (mask & (1u << i)) f.push_back(i);
        universe.push_back(std::move(f));
    }

    // Nonnegative: no cancellation, the envelope equals the induced value.
    auto nonneg = zinc0_sequence();
    auto psi0 = nonpathological_envelope(nonneg, universe);
    auto phi0 = induced_submeasure(nonneg, ModulusMode::ClosedForm);
    for (const auto& f : universe) CHECK(psi0.eval_sorted(f) == phi0.eval_sorted(f));

    // Single-coordinate signed pair: induced value 1, envelope within [1, 2].
    auto pm = explicit_sequence(NormTag::Ell1, {Vector(NormTag::Ell1, {{0, Rational(1)}}),
                                                Vector(NormTag::Ell1, {{0, Rational(-1)}})});
    std::vector<std::vector<std::uint64_t>> pair_universe{{0}, {1}, {0, 1}};
    auto psi1 = nonpathological_envelope(pm, pair_universe);
    std::vector<std::uint64_t> both{0, 1};
    CHECK(induced_submeasure(pm, ModulusMode::Brute).eval_sorted(both).str() == "1");
    CHECK(psi1.eval_sorted(both) >= Rational(1));
    CHECK(psi1.eval_sorted(both) <= Rational(2));

    // Seeded signed sequences: induced <= envelope <= 2 * induced on the
    // whole universe, for both norms.
    Prng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        NormTag tag = trial % 2 == 0 ? NormTag::Sup : NormTag::Ell1;
        auto h = random_signed_sequence(rng, 6, 3, tag);
        auto psi = nonpathological_envelope(h, universe);
        auto phi = induced_submeasure(h, ModulusMode::Brute);
        for (const auto& f : universe) {
            Rational tilde = phi.eval_sorted(f);
            Rational env = psi.eval_sorted(f);
            CHECK(tilde <= env);
            CHECK(env <= Rational(2) * tilde);
        }
    }

    // The envelope is a sup of measures, so it feeds the representation.
    CHECK(psi0.provenance().column_access != nullptr);
}
