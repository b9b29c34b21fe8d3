#include <catch2/catch_amalgamated.hpp>

#include "exh/tails.hpp"
#include "exh/zoo.hpp"

using namespace exh;

TEST_CASE("tail matrix values and monotonicity") {
    auto h = harmonic_summable();

    // h(2^k - 1) = 2^-k, so the truncated sum below 2^20 is 1 - 2^-20:
    // geometric sum oracle, frozen.
    auto a = SetSpec::geometric(2, -1, 1);
    auto tm = tail_matrix(h, a, {0}, std::uint64_t{1} << 20);
    REQUIRE(tm.values.size() == 1);
    CHECK(tm.values[0].str() == "1048575/1048576");
    CHECK(tm.values[0] < Rational(1));

    // Empty set: all zeros.
    auto tz = tail_matrix(h, SetSpec::empty(), {0, 4, 16}, 1024);
    for (const auto& v : tz.values) CHECK(v.is_zero());

    // Farah on all of omega grows harmonically: V[0] at horizon 2^n is
    // sum_{m=1}^{n-1} 1/m, each full block contributing min{m, 2^m}/m^2 = 1/m.
    auto farah = farah_submeasure();
    auto omega = SetSpec::arithmetic(0, 1);
    auto tf = tail_matrix(farah, omega, {0}, std::uint64_t{1} << 10);
    Rational expect(0);
    for (long m = 1; m <= 9; ++m) expect += Rational(1, m);
    CHECK(tf.values[0] == expect);

    // Cutoff monotonicity: non-increasing in N; horizon monotonicity:
    // non-decreasing in H.
    auto tm2 = tail_matrix(h, SetSpec::arithmetic(0, 3), {0, 8, 64, 256}, 1024);
    for (std::size_t i = 1; i < tm2.values.size(); ++i) CHECK(tm2.values[i] <= tm2.values[i - 1]);
    auto tm3 = tail_matrix(h, SetSpec::arithmetic(0, 3), {0, 8, 64, 256}, 2048);
    for (std::size_t i = 0; i < tm3.values.size(); ++i) CHECK(tm3.values[i] >= tm2.values[i]);

    CHECK_THROWS_AS(tail_matrix(h, a, {128}, 64), std::invalid_argument);
}

TEST_CASE("exh verdict: certified tail-below via geometric certificate") {
    auto h = harmonic_summable();
    auto a = SetSpec::geometric(2);  // {2^k}
    for (auto eps : {Rational(1, 2), Rational(1, 64), Rational(1, 4096)}) {
        auto v = exh_verdict(h, a, eps, std::uint64_t{1} << 16);
        CHECK(v.status == MembershipVerdict::Status::TailBelow);
        CHECK(v.certified);
        REQUIRE(v.remainder_bound.has_value());
        CHECK(v.value + *v.remainder_bound < eps);
    }
}

TEST_CASE("exh verdict: finite sets are certified for every epsilon") {
    auto farah = farah_submeasure();
    auto fin = SetSpec::explicit_set({3, 10, 100});
    for (auto eps : {Rational(1, 2), Rational(1, 1024)}) {
        auto v = exh_verdict(farah, fin, eps, 1024);
        CHECK(v.status == MembershipVerdict::Status::TailBelow);
        CHECK(v.certified);
        REQUIRE(v.remainder_bound.has_value());
        CHECK(v.remainder_bound->is_zero());
    }
}

TEST_CASE("exh verdict: divergence witness once the partial sum passes the bar") {
    // The stated example pins a bar of 100 on the full harmonic series, which
    // no finite horizon reaches; the same semantics is exercised at bar 5,
    // which the partial sum passes well before 2^10.
    auto h = harmonic_summable();
    auto omega = SetSpec::arithmetic(0, 1);
    VerdictOptions opts;
    opts.divergence_bar = Rational(5);
    opts.cutoffs = {0};
    auto v = exh_verdict(h, omega, Rational(1, 100), std::uint64_t{1} << 10, opts);
    CHECK(v.status == MembershipVerdict::Status::LowerBoundWitness);
    CHECK(v.value > Rational(5));

    // With the deep default ladder the deepest tail stays below the bar, so
    // the verdict is honestly inconclusive.
    auto v2 = exh_verdict(h, omega, Rational(1, 100), std::uint64_t{1} << 10);
    CHECK(v2.status == MembershipVerdict::Status::Inconclusive);
}

TEST_CASE("exh verdict: uncertified tail-below stays uncertified") {
    // Farah has no tail certificate; an infinite rule below epsilon is
    // reported as tail-below but not certified.
    auto farah = farah_submeasure();
    auto sparse = SetSpec::geometric(4);
    auto v = exh_verdict(farah, sparse, Rational(1), std::uint64_t{1} << 12);
    CHECK(v.status == MembershipVerdict::Status::TailBelow);
    CHECK_FALSE(v.certified);
}

TEST_CASE("intersection profile over the residue pieces") {
    std::vector<MassRule> rules{j0_mass(0), j0_mass(1), j0_mass(2)};

    // A subset of X_0 with geometric gaps: coordinate 0 certified small,
    // the others identically zero.
    auto a = SetSpec::geometric(2, 0, 1);  // {2, 4, 8, ...}, all even
    auto prof = intersection_profile(rules, a, Rational(2), std::uint64_t{1} << 14);
    REQUIRE(prof.coordinates.size() == 3);
    CHECK(prof.joint == IntersectionProfile::Joint::AllTailsBelow);
    CHECK(prof.verdicts[0].certified);
    CHECK(prof.verdicts[1].evidence.values[0].is_zero());
    CHECK(prof.verdicts[2].evidence.values[0].is_zero());

    // Empty set: all zero.
    auto pz = intersection_profile(rules, SetSpec::empty(), Rational(1, 2), 1024);
    for (const auto& tm : pz.coordinates)
        for (const auto& v : tm.values) CHECK(v.is_zero());

    // A = X_0 itself: the coordinate-0 partial sums grow without bound, so a
    // small bar yields a lower-bound witness.
    VerdictOptions opts;
    opts.divergence_bar = Rational(3);
    opts.cutoffs = {0};
    auto px = intersection_profile(rules, j0_piece(0), Rational(1, 100), std::uint64_t{1} << 10,
                                   opts);
    CHECK(px.joint == IntersectionProfile::Joint::SomeDivergence);
    CHECK(px.verdicts[0].status == MembershipVerdict::Status::LowerBoundWitness);
    CHECK(px.verdicts[0].value > Rational(3));
}
