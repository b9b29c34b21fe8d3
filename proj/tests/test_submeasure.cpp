#include <catch2/catch_amalgamated.hpp>

#include "exh/prng.hpp"
#include "exh/submeasure.hpp"
#include "exh/tails.hpp"
#include "exh/zoo.hpp"

using namespace exh;

namespace {

FiniteSupportMeasure measure(std::vector<std::pair<std::uint64_t, Rational>> atoms) {
    return FiniteSupportMeasure(std::move(atoms));
}

using Pair = std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>;

} // namespace

TEST_CASE("eval_on_finite") {
    auto farah = farah_submeasure();
    CHECK(farah.eval_set(SetSpec::intervals({{8, 16}})).str() == "1/3");
    CHECK(farah.eval_set(SetSpec::empty()).str() == "0");
    CHECK(farah.eval_set(SetSpec::explicit_set({8, 9})).str() == "2/9");
    CHECK(farah.eval_set(SetSpec::explicit_set({2, 4, 8, 16, 32})).str() == "5269/3600");

    auto sup = sup_of_measures({measure({{0, Rational(1, 2)}, {1, Rational(1, 2)}}),
                                measure({{2, Rational(1)}})});
    CHECK(sup.eval_set(SetSpec::explicit_set({0, 2})).str() == "1");
    CHECK(sup.eval_set(SetSpec::explicit_set({0, 1})).str() == "1");
    CHECK(sup.eval_set(SetSpec::empty()).str() == "0");

    CHECK_THROWS_AS(farah.eval_set(SetSpec::arithmetic(0, 2)), std::invalid_argument);
}

TEST_CASE("sup_of_measures structure") {
    CHECK_THROWS_AS(sup_of_measures({}), std::invalid_argument);

    auto mu = measure({{3, Rational(2, 7)}});
    auto sup = sup_of_measures({mu});
    // A sup of one measure is that measure.
    CHECK(sup.eval_set(SetSpec::explicit_set({3})) == Rational(2, 7));
    CHECK(sup.eval_set(SetSpec::explicit_set({2, 3, 4})) == Rational(2, 7));

    REQUIRE(sup.provenance().column_access != nullptr);
    auto cols = sup.provenance().column_access->columns_at(3);
    REQUIRE(cols.size() == 1);
    CHECK(cols[0].first == 0);
    CHECK(cols[0].second == Rational(2, 7));

    // Density-ideal columns: uniform 2^-b blocks give the full block value 1.
    auto z = z_preset();
    CHECK(z.eval_set(SetSpec::intervals({{4, 8}})).str() == "1");
    CHECK(z.eval_set(SetSpec::intervals({{4, 6}})).str() == "1/2");
}

TEST_CASE("check_axioms accepts presets and rejects a broken evaluator") {
    Prng rng(7);
    std::vector<Pair> pairs;
    for (int i = 0; i < 200; ++i)
        pairs.emplace_back(rng.subset(1024, rng.below(9)), rng.subset(1024, rng.below(9)));

    for (auto phi : {farah_submeasure(), harmonic_summable(), z_preset(),
                     empty_otimes_fin_submeasure(), trace_null_submeasure(),
                     tree_summable_submeasure(), tree_density_submeasure()}) {
        auto rep = check_axioms(phi, pairs);
        INFO(phi.name() << " failed " << rep.failed_axiom);
        CHECK(rep.ok);
        CHECK(rep.pairs_checked == pairs.size());
    }

    // Nested pairs stay monotone for the antichain-sup evaluator.
    auto tn = trace_null_submeasure();
    std::vector<Pair> nested;
    for (int i = 0; i < 50; ++i) {
        auto y = rng.subset(64, 1 + rng.below(10));
        std::vector<std::uint64_t> x;
        for (auto v : y)
            if (rng.coin()) x.push_back(v);
        nested.emplace_back(std::move(x), std::move(y));
    }
    CHECK(check_axioms(tn, nested).ok);

    // Negative control: phi({0,1}) < phi({0}).
    Submeasure broken("broken", [](std::span<const std::uint64_t> f) {
        if (f.size() == 1 && f[0] == 0) return Rational(2);
        return Rational(static_cast<long>(f.size()), 2);
    });
    std::vector<Pair> control{{{0}, {0, 1}}};
    auto rep = check_axioms(broken, control);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed_axiom == "monotonicity");
    CHECK(rep.x == std::vector<std::uint64_t>{0});
    CHECK(rep.y == std::vector<std::uint64_t>{0, 1});
}

TEST_CASE("symmetric difference metric") {
    auto farah = farah_submeasure();
    auto a = SetSpec::explicit_set({8});
    auto b = SetSpec::explicit_set({9});
    CHECK(symmetric_difference_metric(farah, a, a).str() == "0");
    CHECK(symmetric_difference_metric(farah, a, b).str() == "2/9");
    CHECK(symmetric_difference_metric(farah, a, b) == symmetric_difference_metric(farah, b, a));
}

TEST_CASE("triangle inequality for d_phi on small triples") {
    // Follows from subadditivity; checked exhaustively on subsets of [0,10)
    // by seeded triples for each preset.
    Prng rng(11);
    for (auto phi : {farah_submeasure(), harmonic_summable(), z_preset(),
                     trace_null_submeasure()}) {
        for (int i = 0; i < 300; ++i) {
            auto a = SetSpec::explicit_set(rng.subset(10, rng.below(11)));
            auto b = SetSpec::explicit_set(rng.subset(10, rng.below(11)));
            auto c = SetSpec::explicit_set(rng.subset(10, rng.below(11)));
            Rational ab = symmetric_difference_metric(phi, a, b);
            Rational bc = symmetric_difference_metric(phi, b, c);
            Rational ac = symmetric_difference_metric(phi, a, c);
            CHECK(ac <= ab + bc);
        }
    }
}

TEST_CASE("tallness diagnostics") {
    auto rep = tallness_diagnostic(harmonic_summable(), 64);
    REQUIRE(rep.singleton_values.size() == 64);
    CHECK(rep.singleton_values[0].str() == "1");
    CHECK(rep.singleton_values[63].str() == "1/64");
    CHECK(rep.consistent_with_tall);

    // Mass constant 1 on evens never vanishes.
    std::vector<Rational> vals;
    for (int i = 0; i < 64; ++i) vals.push_back(i % 2 == 0 ? Rational(1) : Rational(0));
    auto notTall = tallness_diagnostic(summable_submeasure(MassRule::ExplicitPrefix{vals}), 64);
    CHECK_FALSE(notTall.consistent_with_tall);
    CHECK(notTall.tail_max[0].str() == "1");

    // Pair rows keep constant weight along their columns, so the running
    // tail max never drops: row 0 keeps reappearing with weight 1.
    auto pairRep = tallness_diagnostic(empty_otimes_fin_submeasure(), 256);
    CHECK_FALSE(pairRep.consistent_with_tall);
}
