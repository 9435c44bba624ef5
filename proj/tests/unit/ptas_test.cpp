#include <doctest.h>

#include <random>

#include "blr/baseline.hpp"
#include "blr/errors.hpp"
#include "blr/oracle.hpp"
#include "blr/ptas.hpp"
#include "test_util.hpp"

using namespace blr;
using testutil::centers_from;
using testutil::random_rows;
using testutil::rows_from;

TEST_CASE("ratio parsing") {
    CHECK(Ratio::parse("0.5") == Ratio{1, 2});
    CHECK(Ratio::parse(".25") == Ratio{1, 4});
    CHECK(Ratio::parse("1/3") == Ratio{1, 3});
    CHECK(Ratio::parse("0.125") == Ratio{1, 8});
    CHECK_THROWS_AS(Ratio::parse("zero"), InvalidParameterError);
    CHECK_THROWS_AS(Ratio::parse("1/0"), InvalidParameterError);
}

TEST_CASE("default parameters match the pinned formulas") {
    {
        const auto p = default_params(2, Ratio{1, 2}, 1.0);
        CHECK(p.tau == 12);   // ceil(8 ln 4)
        CHECK(p.eta == 96);   // ceil(12 * 1 * 2 / 0.25)
        CHECK(p.zeta == 64);  // ceil(32 / 0.5)
    }
    {
        const auto p = default_params(1, Ratio{1, 2}, 1.0);
        CHECK(p.tau == 3);  // ceil(4 ln 2)
    }
    CHECK_THROWS_AS(default_params(2, Ratio::parse("0.6"), 1.0),
                    InvalidParameterError);
    CHECK_THROWS_AS(default_params(0, Ratio{1, 2}, 1.0), InvalidParameterError);
}

TEST_CASE("weight grid values and covering") {
    {
        const WeightGrid grid(1, Ratio{1, 2});
        CHECK(grid.size() == 1);
        CHECK(grid.numerator(0) == BigUint(1));
        CHECK(grid.denominator(0) == BigUint(1));
    }
    {
        const WeightGrid grid(4, Ratio{1, 2});
        CHECK(grid.size() == 8);  // exponents 0..7
        CHECK(grid.base_num() == 5);
        CHECK(grid.base_den() == 4);
        CHECK(grid.numerator(7) == BigUint::pow(5, 7));
        CHECK(grid.denominator(7) == BigUint::pow(4, 7));
        // (5/4)^7 >= 4 but (5/4)^6 < 4.
        CHECK(grid.numerator(7) >= BigUint(4) * BigUint::pow(4, 7));
        CHECK(grid.numerator(6) < BigUint(4) * BigUint::pow(4, 6));
    }
    {
        const WeightGrid grid(100, Ratio{1, 2});
        for (std::uint64_t s = 1; s <= 100; ++s) {
            bool covered = false;
            for (std::size_t j = 0; j < grid.size() && !covered; ++j) {
                // s <= p^j/q^j <= (1+eps/2)*s, exactly in integers:
                // s*q^j <= p^j and p^j*q <= p*q^j*s.
                const BigUint& p = grid.numerator(j);
                const BigUint& q = grid.denominator(j);
                const bool lower = BigUint(s) * q <= p;
                const bool upper = p * BigUint(grid.base_den()) <=
                                   q * BigUint(grid.base_num()) * BigUint(s);
                covered = lower && upper;
            }
            CHECK_MESSAGE(covered, "size ", s, " not covered");
        }
    }
}

TEST_CASE("per-coordinate optimizer on pinned examples") {
    {
        // k=1, unconstrained bits, S = {00, 00, 10}, w = 3 -> center 00.
        const RelationSet r = RelationSet::unconstrained(1, 2);
        const std::vector<std::vector<BitRow>> s{rows_from({"00", "00", "10"})};
        const std::vector<std::uint64_t> w{3};
        CHECK(best_centers(r, s, w) == centers_from({"00"}));
    }
    {
        // Forced all-ones relation ignores the samples.
        const RelationSet r(1, 3, {{1, std::nullopt}});
        const std::vector<std::vector<BitRow>> s{rows_from({"000", "000"})};
        const std::vector<std::uint64_t> w{1};
        CHECK(best_centers(r, s, w) == centers_from({"111"}));
    }
    {
        // k=2, d=2, unconstrained: argmin tuples (0,1) then (1,0).
        const RelationSet r = RelationSet::unconstrained(2, 2);
        const std::vector<std::vector<BitRow>> s{rows_from({"01", "01", "11"}),
                                                 rows_from({"00", "10", "10"})};
        const std::vector<std::uint64_t> w{3, 3};
        const auto c = best_centers(r, s, w);
        CHECK(c == centers_from({"01", "10"}));
    }
    {
        const RelationSet r = RelationSet::unconstrained(1, 2);
        const std::vector<std::vector<BitRow>> s{std::vector<BitRow>{}};
        const std::vector<std::uint64_t> w{1};
        CHECK_THROWS_AS(best_centers(r, s, w), EmptyInputError);
    }
}

TEST_CASE("optimizer with whole clusters and unit weights is exact") {
    std::mt19937_64 gen(15);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t k = 1 + gen() % 3;
        const std::size_t d = 1 + gen() % 6;
        const std::size_t n = k + gen() % (9 - k);
        const auto rows = random_rows(gen, n, d);

        // Random relation, nonempty per coordinate.
        std::vector<std::vector<RelationEntry>> lists(d);
        for (auto& list : lists) {
            do {
                list.clear();
                for (std::uint64_t t = 0; t < (std::uint64_t{1} << k); ++t)
                    if (gen() % 2) list.push_back({t, std::nullopt});
            } while (list.empty());
        }
        const RelationSet relations(k, lists);

        // Random partition with nonempty parts.
        std::vector<std::vector<BitRow>> clusters(k);
        for (std::size_t j = 0; j < k; ++j) clusters[j].push_back(rows[j]);
        for (std::size_t t = k; t < n; ++t)
            clusters[gen() % k].push_back(rows[t]);

        const std::vector<std::uint64_t> unit(k, 1);
        const auto got = best_centers(relations, clusters, unit);
        CHECK(validate_center_set(got, relations));

        // Independent per-coordinate brute force over allowed tuples.
        std::uint64_t expected_cost = 0;
        for (std::size_t i = 0; i < d; ++i) {
            std::uint64_t best = ~std::uint64_t{0};
            for (const auto& entry : relations.coord(i)) {
                std::uint64_t mism = 0;
                for (std::size_t j = 0; j < k; ++j)
                    for (const auto& p : clusters[j])
                        mism += p.bit(i) != ((entry.tuple >> j) & 1);
                best = std::min(best, mism);
            }
            expected_cost += best;
        }
        std::uint64_t got_cost = 0;
        for (std::size_t j = 0; j < k; ++j)
            for (const auto& p : clusters[j])
                got_cost += hamming(p, got.centers[j]);
        CHECK(got_cost == expected_cost);
    }
}

TEST_CASE("optimizer is invariant under weight scaling") {
    std::mt19937_64 gen(16);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + gen() % 3;
        const std::size_t d = 1 + gen() % 5;
        std::vector<std::vector<BitRow>> samples(k);
        for (auto& s : samples) s = random_rows(gen, 1 + gen() % 4, d);
        const RelationSet relations = RelationSet::unconstrained(k, d);

        std::vector<std::uint64_t> small(k);
        for (auto& w : small) w = 1 + gen() % 9;
        std::vector<BigUint> scaled;
        for (auto w : small) scaled.push_back(BigUint::pow(2, 70) * w);

        // Also exercises the wide-weight path against the 128-bit fast path.
        CHECK(best_centers(relations, samples, small) ==
              best_centers(relations, samples, scaled));
    }
}

TEST_CASE("candidate search finds zero-cost clusterings") {
    std::vector<BitRow> rows;
    for (int i = 0; i < 4; ++i) rows.push_back(BitRow::from_string("0000"));
    for (int i = 0; i < 4; ++i) rows.push_back(BitRow::from_string("1111"));
    const RelationSet relations = RelationSet::unconstrained(2, 4);

    PtasParams params = default_params(2, Ratio{1, 2}, 4.0);
    params.tau = 2;
    params.eta = 8;
    params.zeta = 4;

    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        MemoryPointStream x(rows);
        const auto baseline = baseline_binary_kmeans(x, 2, SeededRng(seed, 77));
        const auto result =
            good_centers(x, relations, baseline, params, SeededRng(seed, 78));
        if (result.cost == 0) ++hits;
        CHECK(x.pass_count() == 3);
        CHECK(result.diagnostics.passes_consumed == 2);
    }
    CHECK(hits >= 30);
}

TEST_CASE("k=1 with whole-dataset samples matches the 1-means optimum") {
    std::mt19937_64 gen(17);
    const auto rows = random_rows(gen, 6, 5);
    const RelationSet relations = RelationSet::unconstrained(1, 5);
    PtasParams params;
    params.epsilon = Ratio{1, 2};
    params.tau = 6;   // tau >= n: whole-cluster subsets are enumerated
    params.eta = 64;  // oversample so every point value lands in M
    params.zeta = 2;

    MemoryPointStream x(rows);
    const auto baseline = baseline_binary_kmeans(x, 1, SeededRng(5, 1));
    const auto result =
        good_centers(x, relations, baseline, params, SeededRng(5, 2));
    const auto opt = exact_binary_kmeans(rows, 1).opt;
    CHECK(result.cost == opt);
}

TEST_CASE("constrained search recovers the optimum with whole clusters") {
    // Two planted equal-size clusters; the relation pins center 1 to zero at
    // every coordinate, so the constrained optimum (9) differs from the
    // unconstrained one (0).
    std::vector<BitRow> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(BitRow::from_string("111000"));
    for (int i = 0; i < 3; ++i) rows.push_back(BitRow::from_string("000111"));
    const RelationSet relations(2, 6,
                                {{0b00, std::nullopt}, {0b10, std::nullopt}});
    const auto opt = exact_constrained_kmeans(rows, 2, relations).opt;
    CHECK(opt == 9);

    PtasParams params;
    params.epsilon = Ratio{1, 2};
    params.tau = 3;   // equals the planted cluster size
    params.eta = 32;  // every value reaches M
    params.zeta = 2;

    MemoryPointStream x(rows);
    const auto baseline = baseline_binary_kmeans(x, 2, SeededRng(12, 1));
    const auto result =
        good_centers(x, relations, baseline, params, SeededRng(12, 2));
    CHECK(validate_center_set(result.centers, relations));
    CHECK(result.cost == opt);
}

TEST_CASE("candidate diagnostics stay within the tiny-parameter envelope") {
    std::mt19937_64 gen(18);
    const auto rows = random_rows(gen, 16, 4);
    const RelationSet relations = RelationSet::unconstrained(1, 4);
    PtasParams params;
    params.epsilon = Ratio{1, 2};
    params.tau = 1;
    params.eta = 1;
    params.zeta = 1;

    MemoryPointStream x(rows);
    const auto baseline = baseline_binary_kmeans(x, 1, SeededRng(6, 1));
    REQUIRE(baseline.k() == 1);
    const auto result =
        good_centers(x, relations, baseline, params, SeededRng(6, 2));
    const WeightGrid grid(16, Ratio{1, 2});
    CHECK(result.diagnostics.grid_size == grid.size());
    CHECK(result.diagnostics.subsets_enumerated <= 2);
    CHECK(result.diagnostics.candidates_generated <= 2 * grid.size());
}

TEST_CASE("every candidate satisfies the relations and the best one wins") {
    std::mt19937_64 gen(19);
    const auto rows = random_rows(gen, 8, 4);
    std::vector<std::vector<RelationEntry>> lists(4);
    for (auto& list : lists) {
        list.push_back({0b00, std::nullopt});
        list.push_back({0b11, std::nullopt});
        list.push_back({0b10, std::nullopt});
    }
    const RelationSet relations(2, lists);
    PtasParams params;
    params.epsilon = Ratio{1, 2};
    params.tau = 2;
    params.eta = 4;
    params.zeta = 2;

    MemoryPointStream x(rows);
    const auto baseline = baseline_binary_kmeans(x, 2, SeededRng(7, 1));
    std::vector<CenterSet> candidates;
    const auto result = good_centers(x, relations, baseline, params,
                                     SeededRng(7, 2), [&](const CenterSet& c) {
                                         candidates.push_back(c);
                                     });
    CHECK(validate_center_set(result.centers, relations));
    CHECK(candidates.size() == result.diagnostics.candidates_distinct);
    std::uint64_t best = ~std::uint64_t{0};
    for (const auto& c : candidates) {
        CHECK(validate_center_set(c, relations));
        MemoryPointStream fresh(rows);
        best = std::min(best, cost_phi(c, fresh));
    }
    CHECK(result.cost == best);
}

TEST_CASE("budgeted search truncates deterministically") {
    std::mt19937_64 gen(20);
    const auto rows = random_rows(gen, 12, 5);
    const RelationSet relations = RelationSet::unconstrained(2, 5);
    PtasParams params;
    params.epsilon = Ratio{1, 2};
    params.tau = 2;
    params.eta = 6;
    params.zeta = 2;
    params.candidate_budget = 50;

    auto run = [&](std::uint64_t seed) {
        MemoryPointStream x(rows);
        const auto baseline = baseline_binary_kmeans(x, 2, SeededRng(seed, 1));
        return good_centers(x, relations, baseline, params, SeededRng(seed, 2));
    };
    const auto a = run(3);
    const auto b = run(3);
    CHECK(a.centers == b.centers);
    CHECK(a.cost == b.cost);
    CHECK(a.diagnostics.budget_truncated);
    CHECK(a.diagnostics.candidates_generated <= 2 * 50);  // per repetition

    PtasParams bad = params;
    bad.candidate_budget = 0;
    MemoryPointStream x(rows);
    const auto baseline = baseline_binary_kmeans(x, 2, SeededRng(3, 1));
    CHECK_THROWS_AS(good_centers(x, relations, baseline, bad, SeededRng(3, 2)),
                    InvalidParameterError);
}

TEST_CASE("cluster assignment labels") {
    {
        MemoryPointStream x(rows_from({"00", "11", "00"}));
        CHECK(assign_clusters(x, centers_from({"00", "11"})) ==
              std::vector<std::size_t>{0, 1, 0});
        CHECK(x.pass_count() == 1);
    }
    {
        MemoryPointStream x(rows_from({"01", "10"}));
        CHECK(assign_clusters(x, centers_from({"11"})) ==
              std::vector<std::size_t>{0, 0});
    }
    {
        // Ties go to the lowest index.
        MemoryPointStream x(rows_from({"01"}));
        CHECK(assign_clusters(x, centers_from({"00", "11"})) ==
              std::vector<std::size_t>{0});
    }
}
