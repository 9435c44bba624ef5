#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "blr/errors.hpp"
#include "blr/subset_enum.hpp"
#include "test_util.hpp"

using namespace blr;
using testutil::rows_from;

namespace {

using Tuple = std::vector<std::vector<BitRow>>;

std::vector<Tuple> all_tuples(std::span<const BitRow> m, std::size_t k,
                              std::size_t tau) {
    SubsetEnumerator e(m, k, tau);
    std::vector<Tuple> out;
    e.enumerate([&](const SubsetEnumerator::Alloc& alloc) {
        out.push_back(e.materialize(alloc));
        return true;
    });
    return out;
}

std::string fmt(const Tuple& t) {
    std::string out;
    for (const auto& subset : t) {
        out += '(';
        for (const auto& row : subset) out += row.to_string() + ",";
        out += ')';
    }
    return out;
}

}  // namespace

TEST_CASE("small enumerations by hand") {
    const auto a = BitRow::from_string("0");
    const auto b = BitRow::from_string("1");
    {
        const auto tuples = all_tuples(rows_from({"0", "0", "1"}), 1, 2);
        REQUIRE(tuples.size() == 2);
        CHECK(tuples[0] == Tuple{{a, a}});
        CHECK(tuples[1] == Tuple{{a, b}});
    }
    {
        const auto tuples = all_tuples(rows_from({"0", "1"}), 2, 1);
        REQUIRE(tuples.size() == 2);
        CHECK(tuples[0] == Tuple{{a}, {b}});
        CHECK(tuples[1] == Tuple{{b}, {a}});
    }
    {
        const auto tuples = all_tuples(rows_from({"0", "0", "1", "1"}), 2, 1);
        REQUIRE(tuples.size() == 4);
        CHECK(tuples[0] == Tuple{{a}, {a}});
        CHECK(tuples[1] == Tuple{{a}, {b}});
        CHECK(tuples[2] == Tuple{{b}, {a}});
        CHECK(tuples[3] == Tuple{{b}, {b}});
    }
}

TEST_CASE("insufficient elements are rejected") {
    SeededRng rng(1);
    CHECK_THROWS_AS(enumerate_subsets(rows_from({"0", "1"}), 2, 2, {}, rng),
                    InvalidParameterError);
}

TEST_CASE("count table agrees with direct enumeration") {
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 1 + gen() % 3;
        const std::size_t tau = 1 + gen() % 3;
        const std::size_t distinct = 1 + gen() % 4;
        std::vector<BitRow> m;
        for (std::size_t v = 0; v < distinct; ++v) {
            BitRow row(3);
            for (std::size_t i = 0; i < 3; ++i)
                if ((v >> i) & 1) row.set_bit(i, true);
            const std::size_t copies = 1 + gen() % 4;
            for (std::size_t c = 0; c < copies; ++c) m.push_back(row);
        }
        if (m.size() < k * tau) continue;
        SubsetEnumerator e(m, k, tau);
        std::uint64_t direct = 0;
        e.enumerate([&](const SubsetEnumerator::Alloc&) {
            ++direct;
            return true;
        });
        CHECK(e.total_count() == BigUint(direct));
    }
}

TEST_CASE("unrank reproduces the enumeration order") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 24; ++trial) {
        const std::size_t k = 1 + trial % 3;
        const std::size_t tau = 1 + gen() % (k == 3 ? 2 : 3);
        std::vector<BitRow> m;
        for (int i = 0; i < 8; ++i) m.push_back(testutil::random_row(gen, 4));
        if (m.size() < k * tau) continue;
        SubsetEnumerator e(m, k, tau);
        const auto tuples = all_tuples(m, k, tau);
        REQUIRE(e.total_count() == BigUint(tuples.size()));
        for (std::size_t rank = 0; rank < tuples.size(); ++rank) {
            const auto got = e.materialize(e.unrank(BigUint(rank)));
            CHECK_MESSAGE(got == tuples[rank], fmt(got), " vs ",
                          fmt(tuples[rank]));
        }
        CHECK_THROWS_AS(e.unrank(BigUint(tuples.size())), InvalidParameterError);
    }
}

TEST_CASE("budget keeps the deterministic prefix and samples the rest") {
    std::mt19937_64 gen(4);
    std::vector<BitRow> m;
    for (int i = 0; i < 10; ++i) m.push_back(testutil::random_row(gen, 5));

    SeededRng rng_a(7), rng_b(7), rng_c(8), rng_full(9);
    const auto full = enumerate_subsets(m, 2, 2, {}, rng_full);
    REQUIRE(full.size() > 21);

    const auto capped_a = enumerate_subsets(m, 2, 2, 21, rng_a);
    const auto capped_b = enumerate_subsets(m, 2, 2, 21, rng_b);
    const auto capped_c = enumerate_subsets(m, 2, 2, 21, rng_c);
    REQUIRE(capped_a.size() == 21);
    CHECK(capped_a == capped_b);  // same seed, same selection
    CHECK(capped_a != capped_c);  // different seed moves the random half

    // First ceil(21/2) = 11 match the unbudgeted order.
    for (std::size_t i = 0; i < 11; ++i) CHECK(capped_a[i] == full[i]);

    // Every sampled tuple exists in the full enumeration past the prefix,
    // and all returned tuples are pairwise distinct.
    std::set<std::string> seen;
    for (const auto& t : capped_a) CHECK(seen.insert(fmt(t)).second);
    for (std::size_t i = 11; i < capped_a.size(); ++i) {
        const auto it = std::find(full.begin() + 11, full.end(), capped_a[i]);
        CHECK(it != full.end());
    }

    // A budget at least the total returns everything.
    SeededRng rng_d(10);
    CHECK(enumerate_subsets(m, 2, 2, full.size(), rng_d) == full);

    SeededRng rng_e(11);
    CHECK_THROWS_AS(enumerate_subsets(m, 2, 2, 0, rng_e),
                    InvalidParameterError);
}

TEST_CASE("multiplicity caps do not change the tuple set") {
    // 30 copies of one value, k=2, tau=2: identical to 4 copies.
    std::vector<BitRow> flood(30, BitRow::from_string("101"));
    flood.push_back(BitRow::from_string("010"));
    std::vector<BitRow> capped(4, BitRow::from_string("101"));
    capped.push_back(BitRow::from_string("010"));
    CHECK(all_tuples(flood, 2, 2) == all_tuples(capped, 2, 2));
}
