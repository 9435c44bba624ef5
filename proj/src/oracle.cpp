#include "blr/oracle.hpp"

#include <algorithm>
#include <map>

#include "blr/errors.hpp"

namespace blr {

namespace {

struct Tally {
    std::vector<BitRow> values;
    std::vector<std::uint64_t> weights;
};

Tally tally_points(std::span<const BitRow> points) {
    std::map<BitRow, std::uint64_t> counts;
    for (const auto& p : points) ++counts[p];
    Tally out;
    for (auto& [value, count] : counts) {
        out.values.push_back(value);
        out.weights.push_back(count);
    }
    return out;
}

std::uint64_t pow_u64_checked(std::uint64_t base, std::uint64_t exp,
                              std::uint64_t cap) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (out > cap / base) return cap + 1;
        out *= base;
    }
    return out;
}

}  // namespace

ExactKmeansResult exact_constrained_kmeans(std::span<const BitRow> points,
                                           std::size_t k,
                                           const RelationSet& relations,
                                           const OracleLimits& limits) {
    if (points.empty())
        throw EmptyInputError("exact_constrained_kmeans: no points");
    if (k == 0 || k != relations.k())
        throw ShapeMismatchError("exact_constrained_kmeans: k mismatch");
    const std::size_t d = points.front().width();
    if (d != relations.d())
        throw ShapeMismatchError("exact_constrained_kmeans: width differs from relation d");

    const Tally tally = tally_points(points);
    const std::size_t m = tally.values.size();
    if (m > limits.max_distinct || d > limits.max_d || k > limits.max_k)
        throw LimitsExceededError("exact_constrained_kmeans: instance beyond oracle limits");

    const std::uint64_t assignments =
        pow_u64_checked(k, m, limits.op_budget);
    std::uint64_t per_coord = m;
    for (std::size_t i = 0; i < d; ++i)
        per_coord = std::max<std::uint64_t>(per_coord, relations.coord(i).size());
    if (assignments > limits.op_budget ||
        assignments > limits.op_budget / (d * (per_coord * k + m) + 1))
        throw LimitsExceededError("exact_constrained_kmeans: operation budget exceeded");

    std::vector<std::size_t> assign(m, 0);
    std::vector<std::vector<std::uint64_t>> ones(k, std::vector<std::uint64_t>(d));
    std::vector<std::uint64_t> cluster_weight(k);

    bool have_best = false;
    std::uint64_t best_cost = 0;
    std::vector<std::uint64_t> best_tuples(d, 0);

    for (;;) {
        // Weighted one-counts per cluster under this assignment.
        for (std::size_t j = 0; j < k; ++j) {
            cluster_weight[j] = 0;
            std::fill(ones[j].begin(), ones[j].end(), 0);
        }
        for (std::size_t v = 0; v < m; ++v) {
            const std::size_t j = assign[v];
            cluster_weight[j] += tally.weights[v];
            for (std::size_t i = 0; i < d; ++i)
                if (tally.values[v].bit(i)) ones[j][i] += tally.weights[v];
        }

        std::uint64_t cost = 0;
        std::vector<std::uint64_t> tuples(d, 0);
        for (std::size_t i = 0; i < d; ++i) {
            std::uint64_t coord_best = ~std::uint64_t{0};
            for (const auto& entry : relations.coord(i)) {
                std::uint64_t mismatches = 0;
                for (std::size_t j = 0; j < k; ++j)
                    mismatches += (entry.tuple >> j) & 1
                                      ? cluster_weight[j] - ones[j][i]
                                      : ones[j][i];
                if (mismatches < coord_best) {
                    coord_best = mismatches;
                    tuples[i] = entry.tuple;
                }
            }
            cost += coord_best;
        }
        if (!have_best || cost < best_cost) {
            have_best = true;
            best_cost = cost;
            best_tuples = tuples;
        }

        // Next assignment in base-k counter order.
        std::size_t pos = m;
        bool done = true;
        while (pos-- > 0) {
            if (++assign[pos] < k) {
                done = false;
                break;
            }
            assign[pos] = 0;
        }
        if (done) break;
    }

    std::vector<BitRow> centers(k, BitRow(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if ((best_tuples[i] >> j) & 1) centers[j].set_bit(i, true);
    return {CenterSet(std::move(centers)), best_cost};
}

ExactKmeansResult exact_binary_kmeans(std::span<const BitRow> points,
                                      std::size_t k, const OracleLimits& limits) {
    if (points.empty()) throw EmptyInputError("exact_binary_kmeans: no points");
    return exact_constrained_kmeans(
        points, k, RelationSet::unconstrained(k, points.front().width()), limits);
}

Factorization exact_lowrank(std::span<const BitRow> rows, std::size_t r,
                            const InnerProduct& f, const OracleLimits& limits) {
    if (rows.empty()) throw EmptyInputError("exact_lowrank: empty matrix");
    if (r == 0 || r > limits.max_r)
        throw LimitsExceededError("exact_lowrank: rank beyond oracle limits");
    if (f.rank() != r)
        throw WidthMismatchError("exact_lowrank: inner product rank mismatch");
    const std::size_t d = rows.front().width();
    if (d > limits.max_d)
        throw LimitsExceededError("exact_lowrank: width beyond oracle limits");
    for (const auto& row : rows)
        if (row.width() != d)
            throw WidthMismatchError("exact_lowrank: ragged matrix rows");

    const Tally tally = tally_points(rows);
    const std::size_t m = tally.values.size();
    if (m > limits.max_distinct)
        throw LimitsExceededError("exact_lowrank: too many distinct rows");

    const std::size_t u_count = std::size_t{1} << r;
    const std::uint64_t v_count =
        pow_u64_checked(2, static_cast<std::uint64_t>(r) * d, limits.op_budget);
    if (v_count > limits.op_budget ||
        v_count > limits.op_budget / (u_count * (d + m) + 1))
        throw LimitsExceededError("exact_lowrank: operation budget exceeded");

    std::vector<BitRow> predicted(u_count, BitRow(d));
    std::vector<std::size_t> best_u(m, 0);

    bool have_best = false;
    std::uint64_t best_cost = 0;
    std::uint64_t best_v_code = 0;
    std::vector<std::size_t> best_assign(m, 0);

    for (std::uint64_t v_code = 0; v_code < v_count; ++v_code) {
        // Column i of V as an r-bit operand (first factor row most
        // significant); bit (l*d + i) of v_code is V[l][i].
        for (std::size_t u = 0; u < u_count; ++u) {
            BitRow& row = predicted[u];
            for (std::size_t i = 0; i < d; ++i) {
                std::uint32_t col = 0;
                for (std::size_t l = 0; l < r; ++l)
                    if ((v_code >> (l * d + i)) & 1)
                        col |= std::uint32_t{1} << (r - 1 - l);
                row.set_bit(i, f(static_cast<std::uint32_t>(u), col) != 0);
            }
        }
        std::uint64_t cost = 0;
        for (std::size_t v = 0; v < m; ++v) {
            std::uint64_t row_best = ~std::uint64_t{0};
            for (std::size_t u = 0; u < u_count; ++u) {
                const std::uint64_t dist = hamming(tally.values[v], predicted[u]);
                if (dist < row_best) {
                    row_best = dist;
                    best_u[v] = u;
                }
            }
            cost += row_best * tally.weights[v];
        }
        if (!have_best || cost < best_cost) {
            have_best = true;
            best_cost = cost;
            best_v_code = v_code;
            best_assign = best_u;
        }
    }

    Factorization out;
    out.error = best_cost;
    out.v_rows.reserve(r);
    for (std::size_t l = 0; l < r; ++l) {
        BitRow vrow(d);
        for (std::size_t i = 0; i < d; ++i)
            if ((best_v_code >> (l * d + i)) & 1) vrow.set_bit(i, true);
        out.v_rows.push_back(std::move(vrow));
    }
    out.u_rows.reserve(rows.size());
    for (const auto& row : rows) {
        const auto it = std::lower_bound(tally.values.begin(), tally.values.end(),
                                         row);
        const std::size_t v = static_cast<std::size_t>(it - tally.values.begin());
        BitRow urow(r);
        for (std::size_t l = 0; l < r; ++l)
            if ((best_assign[v] >> (r - 1 - l)) & 1) urow.set_bit(l, true);
        out.u_rows.push_back(std::move(urow));
    }
    return out;
}

}  // namespace blr
