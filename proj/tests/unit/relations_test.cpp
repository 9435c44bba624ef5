#include <doctest.h>

#include <random>

#include "blr/errors.hpp"
#include "blr/relations.hpp"
#include "test_util.hpp"

using namespace blr;
using testutil::centers_from;

namespace {

// Operand encoding: first coordinate is the most significant bit.
constexpr std::uint32_t kVec11 = 0b11;
constexpr std::uint32_t kVec10 = 0b10;
constexpr std::uint32_t kVec01 = 0b01;

std::vector<std::uint64_t> tuples_of(const std::vector<RelationEntry>& entries) {
    std::vector<std::uint64_t> out;
    for (const auto& e : entries) out.push_back(e.tuple);
    return out;
}

}  // namespace

TEST_CASE("inner products on known operands") {
    const auto g = InnerProduct::gf2(2);
    const auto b = InnerProduct::boolean(2);
    CHECK(inner_product(kVec11, kVec11, g) == 0);
    CHECK(inner_product(kVec11, kVec11, b) == 1);
    CHECK(inner_product(kVec10, kVec01, g) == 0);
    CHECK(inner_product(kVec10, kVec01, b) == 0);
    CHECK(inner_product(kVec10, kVec10, g) == 1);
    CHECK_THROWS_AS(inner_product(4, 0, g), WidthMismatchError);
}

TEST_CASE("table inner product spells out all entries") {
    // f(x, y) = x AND NOT y on single bits: asymmetric on purpose.
    const auto f = InnerProduct::table(1, {false, false, true, false});
    CHECK(f(0, 0) == 0);
    CHECK(f(0, 1) == 0);
    CHECK(f(1, 0) == 1);
    CHECK(f(1, 1) == 0);
    CHECK_THROWS_AS(InnerProduct::table(1, {true}), InvalidParameterError);
}

TEST_CASE("rank-1 relation for gf2 and boolean") {
    for (const auto& f : {InnerProduct::gf2(1), InnerProduct::boolean(1)}) {
        const auto entries = build_lowrank_relation(1, f);
        REQUIRE(entries.size() == 2);
        // (0,0) with witness 0 and (0,1) with witness 1.
        CHECK(entries[0].tuple == 0);
        CHECK(entries[0].witness == 0u);
        CHECK(entries[1].tuple == 0b10);
        CHECK(entries[1].witness == 1u);
    }
}

TEST_CASE("rank-2 gf2 relation matches direct evaluation") {
    const auto f = InnerProduct::gf2(2);
    const auto entries = build_lowrank_relation(2, f);
    REQUIRE(entries.size() == 4);

    // Independent evaluation of all 4x4 inner products, one tuple per x.
    std::vector<std::uint64_t> expected;
    for (std::uint32_t x = 0; x < 4; ++x) {
        std::uint64_t tuple = 0;
        for (std::uint32_t lambda = 0; lambda < 4; ++lambda) {
            const int parity = __builtin_popcount(x & lambda) & 1;
            if (parity) tuple |= std::uint64_t{1} << lambda;
        }
        expected.push_back(tuple);
    }
    std::sort(expected.begin(), expected.end());
    CHECK(tuples_of(entries) == expected);

    // Spec'd tuples: (0,0,0,0) w=00, (0,1,0,1) w=01, (0,0,1,1) w=10,
    // (0,1,1,0) w=11 in tuple-sorted order.
    CHECK(entries[0].tuple == 0);
    CHECK(entries[0].witness == 0u);
    CHECK(entries[1].tuple == 0b0110);
    CHECK(entries[1].witness == 0b11u);
    CHECK(entries[2].tuple == 0b1010);
    CHECK(entries[2].witness == 0b01u);
    CHECK(entries[3].tuple == 0b1100);
    CHECK(entries[3].witness == 0b10u);
}

TEST_CASE("witnesses reproduce their tuples for every field kind") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t r = 1 + trial % 3;
        const std::size_t side = std::size_t{1} << r;
        std::vector<bool> entries(side * side);
        for (auto&& e : entries) e = gen() & 1;
        const auto f = InnerProduct::table(r, entries);
        for (const auto& entry : build_lowrank_relation(r, f)) {
            REQUIRE(entry.witness.has_value());
            for (std::uint32_t lambda = 0; lambda < side; ++lambda)
                CHECK(((entry.tuple >> lambda) & 1) ==
                      static_cast<std::uint64_t>(f(lambda, *entry.witness)));
        }
    }
}

TEST_CASE("relation size never exceeds 2^r and rank cap holds") {
    for (std::size_t r = 1; r <= 3; ++r)
        CHECK(build_lowrank_relation(r, InnerProduct::boolean(r)).size() <=
              (std::size_t{1} << r));
    CHECK_THROWS_AS(build_lowrank_relation(7, InnerProduct::gf2(7)),
                    InvalidParameterError);
    CHECK_THROWS_AS(build_lowrank_relation(7, InnerProduct::gf2(7), 8),
                    LimitsExceededError);
    // All witnesses collapse to one tuple under the all-zero table.
    const auto all_zero = InnerProduct::table(2, std::vector<bool>(16, false));
    const auto collapsed = build_lowrank_relation(2, all_zero);
    REQUIRE(collapsed.size() == 1);
    CHECK(collapsed[0].witness == 0u);  // smallest witness kept
}

TEST_CASE("center set validation against relations") {
    const auto any = RelationSet::unconstrained(2, 3);
    CHECK(validate_center_set(centers_from({"000", "111"}), any));
    CHECK(validate_center_set(centers_from({"101", "010"}), any));

    // Tuple (0,1) forced at every coordinate: bit of center 2 only.
    const RelationSet forced(2, 3, {{0b10, std::nullopt}});
    CHECK(validate_center_set(centers_from({"000", "111"}), forced));
    CHECK(!validate_center_set(centers_from({"111", "000"}), forced));
    CHECK_THROWS_AS(validate_center_set(centers_from({"000"}), forced),
                    ShapeMismatchError);
}

TEST_CASE("validation is monotone under enlarged relations") {
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + gen() % 3;
        const std::size_t d = 1 + gen() % 4;
        std::vector<std::vector<RelationEntry>> lists(d);
        for (auto& list : lists) {
            const std::uint64_t all = std::uint64_t{1} << k;
            for (std::uint64_t t = 0; t < all; ++t)
                if (gen() % 2) list.push_back({t, std::nullopt});
            if (list.empty()) list.push_back({gen() % all, std::nullopt});
        }
        RelationSet narrow(k, lists);
        std::vector<BitRow> centers;
        for (std::size_t j = 0; j < k; ++j)
            centers.push_back(testutil::random_row(gen, d));
        const CenterSet cs{centers};
        const bool before = validate_center_set(cs, narrow);
        for (auto& list : lists)
            list.push_back({gen() % (std::uint64_t{1} << k), std::nullopt});
        RelationSet wide(k, lists);
        if (before) CHECK(validate_center_set(cs, wide));
    }
}

TEST_CASE("relations text format round-trips") {
    const auto any = parse_relations("k=2 d=2\ncoord 1: *\ncoord 2: *\n");
    CHECK(any.k() == 2);
    CHECK(any.d() == 2);
    CHECK(any.coord(0).size() == 4);
    CHECK(any.coord(1).size() == 4);

    const auto uni = parse_relations("k=2 d=3\nuniform: 00 01\n");
    CHECK(uni.uniform());
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(uni.coord(i).size() == 2);
        CHECK(uni.coord(i)[0].tuple == 0);
        CHECK(uni.coord(i)[1].tuple == 0b10);  // "01" = (c1,c2) = (0,1)
    }

    CHECK_THROWS_AS(parse_relations("k=2 d=1\ncoord 1: 001\n"), ParseError);
    CHECK_THROWS_AS(parse_relations("k=2 d=2\ncoord 1: 00\ncoord 1: 01\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_relations("d=2 k=2\n"), ParseError);
    CHECK_THROWS_AS(parse_relations("k=2 d=1\ncoord 1:\n"), EmptyRelationError);

    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 1 + gen() % 4;
        const std::size_t d = 1 + gen() % 5;
        std::vector<std::vector<RelationEntry>> lists(d);
        for (auto& list : lists) {
            do {
                list.clear();
                for (std::uint64_t t = 0; t < (std::uint64_t{1} << k); ++t)
                    if (gen() % 2) list.push_back({t, std::nullopt});
            } while (list.empty());
        }
        const RelationSet original(k, lists);
        CHECK(parse_relations(serialize_relations(original)) == original);
    }
    const RelationSet uniform_set(3, 4, {{0, std::nullopt}, {5, std::nullopt}});
    CHECK(parse_relations(serialize_relations(uniform_set)) == uniform_set);
}

TEST_CASE("comments are allowed anywhere in relation files") {
    const auto r = parse_relations(
        "# leading comment\nk=1 d=2 # header note\ncoord 1: 0 1\ncoord 2: 1\n");
    CHECK(r.coord(0).size() == 2);
    CHECK(r.coord(1).size() == 1);
    CHECK(r.coord(1)[0].tuple == 1);
}
