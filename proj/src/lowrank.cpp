#include "blr/lowrank.hpp"

#include "blr/baseline.hpp"
#include "blr/errors.hpp"

namespace blr {

ReducedInstance reduce_to_kmeans(std::size_t d, std::size_t r,
                                 const InnerProduct& f, std::size_t max_rank) {
    auto entries = build_lowrank_relation(r, f, max_rank);
    const std::size_t k = std::size_t{1} << r;
    std::vector<std::uint32_t> lambdas(k);
    for (std::size_t j = 0; j < k; ++j) lambdas[j] = static_cast<std::uint32_t>(j);
    return {k, RelationSet(k, d, std::move(entries)), std::move(lambdas)};
}

std::vector<std::uint32_t> witnesses_for(const CenterSet& centers,
                                         const RelationSet& relations) {
    if (centers.k() != relations.k() || centers.width() != relations.d())
        throw ShapeMismatchError("witnesses_for: center set does not match relations");
    std::vector<std::uint32_t> witnesses(relations.d());
    for (std::size_t i = 0; i < relations.d(); ++i) {
        std::uint64_t tuple = 0;
        for (std::size_t j = 0; j < centers.k(); ++j)
            if (centers.centers[j].bit(i)) tuple |= std::uint64_t{1} << j;
        const auto w = relations.witness_for(i, tuple);
        if (!w)
            throw MissingWitnessError(
                "witnesses_for: tuple at coordinate " + std::to_string(i + 1) +
                " has no stored witness (foreign relation set?)");
        witnesses[i] = *w;
    }
    return witnesses;
}

Factorization reconstruct_factors(const std::vector<std::size_t>& labels,
                                  const std::vector<std::uint32_t>& witnesses,
                                  std::size_t r) {
    Factorization out;
    out.u_rows.reserve(labels.size());
    for (const auto label : labels) {
        BitRow urow(r);
        for (std::size_t l = 0; l < r; ++l)
            if ((label >> (r - 1 - l)) & 1) urow.set_bit(l, true);
        out.u_rows.push_back(std::move(urow));
    }
    const std::size_t d = witnesses.size();
    out.v_rows.assign(r, BitRow(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t l = 0; l < r; ++l)
            if ((witnesses[i] >> (r - 1 - l)) & 1) out.v_rows[l].set_bit(i, true);
    return out;
}

namespace {

std::uint32_t row_as_operand(const BitRow& row) {
    std::uint32_t out = 0;
    for (std::size_t l = 0; l < row.width(); ++l)
        if (row.bit(l)) out |= std::uint32_t{1} << (row.width() - 1 - l);
    return out;
}

}  // namespace

std::uint64_t l0_error(PointStream& a, const Factorization& factors,
                       const InnerProduct& f) {
    const std::size_t r = factors.v_rows.size();
    if (r == 0 || f.rank() != r)
        throw ShapeMismatchError("l0_error: factor rank does not match inner product");
    const std::size_t d = factors.v_rows.front().width();
    if (d != a.width())
        throw ShapeMismatchError("l0_error: V width differs from the stream");
    for (const auto& urow : factors.u_rows)
        if (urow.width() != r)
            throw ShapeMismatchError("l0_error: U row width differs from rank");

    // Every possible U row value maps to one predicted row; mismatches per
    // data row are then a single Hamming distance.
    const std::size_t u_count = std::size_t{1} << r;
    std::vector<BitRow> predicted(u_count, BitRow(d));
    for (std::size_t u = 0; u < u_count; ++u)
        for (std::size_t i = 0; i < d; ++i) {
            std::uint32_t col = 0;
            for (std::size_t l = 0; l < r; ++l)
                if (factors.v_rows[l].bit(i))
                    col |= std::uint32_t{1} << (r - 1 - l);
            predicted[u].set_bit(i, f(static_cast<std::uint32_t>(u), col) != 0);
        }

    std::uint64_t mismatches = 0;
    std::size_t t = 0;
    a.for_each_row([&](const BitRow& row) {
        if (t >= factors.u_rows.size())
            throw ShapeMismatchError("l0_error: U has fewer rows than the stream");
        mismatches += hamming(row, predicted[row_as_operand(factors.u_rows[t])]);
        ++t;
    });
    if (t != factors.u_rows.size())
        throw ShapeMismatchError("l0_error: U has more rows than the stream");
    return mismatches;
}

LowRankResult lowrank_approx(PointStream& a, std::size_t r, const InnerProduct& f,
                             const PtasParams& params, SeededRng rng,
                             std::size_t max_rank, double coreset_constant) {
    const auto reduced = reduce_to_kmeans(a.width(), r, f, max_rank);

    // Pass 1: constant-factor unconstrained solution.
    std::uint64_t baseline_peak = 0;
    const CenterSet baseline = baseline_binary_kmeans(
        a, reduced.k, rng.fork(11), coreset_constant, &baseline_peak);

    // Passes 2 and 3: constrained candidate search.
    auto search = good_centers(a, reduced.relations, baseline, params,
                               rng.fork(12));

    // Pass 4: row labels.
    auto labels = assign_clusters(a, search.centers);

    auto witnesses = witnesses_for(search.centers, reduced.relations);
    Factorization factors = reconstruct_factors(labels, witnesses, r);
    factors.error = search.cost;

    LowRankResult out;
    out.factorization = std::move(factors);
    out.centers = std::move(search.centers);
    out.labels = std::move(labels);
    out.diagnostics = search.diagnostics;
    out.baseline_peak_stored = baseline_peak;
    return out;
}

}  // namespace blr
