#include "blr/center_set.hpp"

#include "blr/errors.hpp"

namespace blr {

std::pair<std::size_t, std::uint64_t> nearest_center(const BitRow& x,
                                                     const CenterSet& centers) {
    if (centers.k() == 0)
        throw EmptyInputError("nearest_center: empty center set");
    std::size_t best_index = 0;
    std::uint64_t best_dist = hamming(x, centers.centers[0]);
    for (std::size_t j = 1; j < centers.k(); ++j) {
        const std::uint64_t dist = hamming(x, centers.centers[j]);
        if (dist < best_dist) {
            best_dist = dist;
            best_index = j;
        }
    }
    return {best_index, best_dist};
}

std::uint64_t cost_phi(const CenterSet& centers, PointStream& stream) {
    if (centers.k() == 0)
        throw EmptyInputError("cost_phi: empty center set");
    std::uint64_t total = 0;
    std::uint64_t rows = 0;
    stream.for_each_row([&](const BitRow& row) {
        total += nearest_center(row, centers).second;
        ++rows;
    });
    if (rows == 0) throw EmptyInputError("cost_phi: empty dataset");
    return total;
}

std::vector<std::uint64_t> multi_cost(std::span<const CenterSet> candidates,
                                      PointStream& stream) {
    if (candidates.empty())
        throw EmptyInputError("multi_cost: no candidate center sets");
    for (const auto& cand : candidates)
        if (cand.k() == 0)
            throw EmptyInputError("multi_cost: empty center set among candidates");
    std::vector<std::uint64_t> totals(candidates.size(), 0);
    std::uint64_t rows = 0;
    stream.for_each_row([&](const BitRow& row) {
        for (std::size_t i = 0; i < candidates.size(); ++i)
            totals[i] += nearest_center(row, candidates[i]).second;
        ++rows;
    });
    if (rows == 0) throw EmptyInputError("multi_cost: empty dataset");
    return totals;
}

BitRow majority_center(std::span<const BitRow> points) {
    if (points.empty()) throw EmptyInputError("majority_center: no points");
    const std::size_t width = points.front().width();
    std::vector<std::uint64_t> ones(width, 0);
    for (const auto& p : points) {
        if (p.width() != width)
            throw WidthMismatchError("majority_center: ragged point widths");
        for (std::size_t i = 0; i < width; ++i) ones[i] += p.bit(i);
    }
    BitRow out(width);
    for (std::size_t i = 0; i < width; ++i)
        if (2 * ones[i] > points.size()) out.set_bit(i, true);
    return out;
}

}  // namespace blr
