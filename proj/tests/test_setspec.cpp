#include <catch2/catch_amalgamated.hpp>

#include "exh/setspec.hpp"

using namespace exh;

namespace {

std::vector<std::uint64_t> elems(const SetSpec& s, std::uint64_t horizon) {
    auto en = s.enumerate_below(horizon);
    REQUIRE(en.complete);
    return en.elems;
}

} // namespace

TEST_CASE("explicit and interval rules") {
    auto e = SetSpec::explicit_set({1, 4, 9});
    CHECK(elems(e, 100) == std::vector<std::uint64_t>{1, 4, 9});
    CHECK(elems(e, 5) == std::vector<std::uint64_t>{1, 4});
    CHECK(e.contains(4));
    CHECK_FALSE(e.contains(5));
    CHECK(e.is_finite());
    CHECK(e.finite_bound() == 10);
    CHECK_THROWS_AS(SetSpec::explicit_set({3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(SetSpec::explicit_set({3, 1}), std::invalid_argument);

    auto iv = SetSpec::intervals({{8, 16}});
    CHECK(elems(iv, 100).size() == 8);
    CHECK(iv.contains(8));
    CHECK_FALSE(iv.contains(16));
    CHECK_THROWS_AS(SetSpec::intervals({{4, 4}}), std::invalid_argument);
    CHECK_THROWS_AS(SetSpec::intervals({{4, 8}, {6, 10}}), std::invalid_argument);
}

TEST_CASE("arithmetic and geometric rules") {
    auto ar = SetSpec::arithmetic(3, 8);  // {3, 11, 19, ...}
    CHECK(elems(ar, 30) == std::vector<std::uint64_t>{3, 11, 19, 27});
    CHECK(ar.contains(19));
    CHECK_FALSE(ar.contains(20));
    CHECK_FALSE(ar.is_finite());

    auto g = SetSpec::geometric(2);  // {1, 2, 4, 8, ...}
    CHECK(elems(g, 20) == std::vector<std::uint64_t>{1, 2, 4, 8, 16});
    CHECK(g.contains(16));
    CHECK_FALSE(g.contains(12));

    auto gm = SetSpec::geometric(2, -1, 1);  // {2^k - 1 : k >= 1}
    CHECK(elems(gm, 40) == std::vector<std::uint64_t>{1, 3, 7, 15, 31});
    CHECK(gm.contains(31));
    CHECK_FALSE(gm.contains(0));  // first exponent excludes 2^0 - 1

    CHECK_THROWS_AS(SetSpec::geometric(1), std::invalid_argument);
    CHECK_THROWS_AS(SetSpec::geometric(2, -2), std::invalid_argument);
}

TEST_CASE("block selector rules") {
    auto full = SetSpec::block_select(Partition::Dyadic, CountRule{CountRule::Kind::Full});
    CHECK(elems(full, 10) == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK_FALSE(full.contains(0));  // dyadic blocks start at 1

    auto two = SetSpec::block_select(Partition::Dyadic, CountRule{CountRule::Kind::Constant, 2});
    CHECK(elems(two, 20) == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 8, 9, 16, 17});

    auto sq = SetSpec::block_select(Partition::Dyadic, CountRule{CountRule::Kind::Isqrt});
    // floor(sqrt(b)) points from block b: none for b=0, one for b in 1..3, two for b=4..
    CHECK(elems(sq, 40) == std::vector<std::uint64_t>{2, 4, 8, 16, 17, 32, 33});

    auto tri = SetSpec::block_select(Partition::Triangle, CountRule{CountRule::Kind::Constant, 1});
    CHECK(elems(tri, 16) == std::vector<std::uint64_t>{0, 1, 3, 6, 10, 15});
}

TEST_CASE("partition helpers") {
    CHECK(partition_block_of(Partition::Dyadic, 0) == std::nullopt);
    CHECK(partition_block_of(Partition::Dyadic, 1) == 0);
    CHECK(partition_block_of(Partition::Dyadic, 9) == 3);
    for (std::uint64_t x = 0; x < 500; ++x) {
        auto n = partition_block_of(Partition::Triangle, x);
        REQUIRE(n.has_value());
        CHECK(partition_block_start(Partition::Triangle, *n) <= x);
        CHECK(x < partition_block_end(Partition::Triangle, *n));
        auto q = partition_block_of(Partition::Pow2, x);
        REQUIRE(q.has_value());
        CHECK(partition_block_start(Partition::Pow2, *q) <= x);
        CHECK(x < partition_block_end(Partition::Pow2, *q));
    }
    CHECK(partition_block_start(Partition::Pow2, 0) == 0);
    CHECK(partition_block_start(Partition::Pow2, 3) == 7);
}

TEST_CASE("tree rules enumerate as node indices") {
    TreeSetRule full;
    full.kind = TreeSetRule::Kind::FullLevels;
    full.lo = 1;
    full.hi = 2;
    CHECK(elems(SetSpec::tree(full), 100) == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6});

    TreeSetRule spine;
    spine.kind = TreeSetRule::Kind::Spine;
    spine.lo = 0;
    spine.hi = 3;
    CHECK(elems(SetSpec::tree(spine), 100) == std::vector<std::uint64_t>{0, 1, 3, 7});

    TreeSetRule wz;  // {s in 2^4 : s restricted to [2,4) == 0}
    wz.kind = TreeSetRule::Kind::WindowZero;
    wz.m = 2;
    wz.n = 1;
    auto ws = elems(SetSpec::tree(wz), 1000);
    REQUIRE(ws.size() == 4);
    for (auto idx : ws) {
        TreeNode s = node_at(idx);
        CHECK(s.level == 4);
        CHECK((s.bits & 3) == 0);
    }

    TreeSetRule sub;
    sub.kind = TreeSetRule::Kind::SubtreeLevels;
    sub.prefix = node_from_string("1");
    sub.lo = 1;
    sub.hi = 2;
    auto se = elems(SetSpec::tree(sub), 100);
    CHECK(se == std::vector<std::uint64_t>{2, 5, 6});
}

TEST_CASE("enumeration budget flags incomplete listings") {
    auto ar = SetSpec::arithmetic(0, 1);
    auto en = ar.enumerate_below(1000, 10);
    CHECK_FALSE(en.complete);
    CHECK(en.elems.size() == 10);
    CHECK_THROWS_AS(slice(ar, 0, 1000, 10), BudgetExceeded);
}
