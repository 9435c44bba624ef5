#include "blr/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blr/errors.hpp"

namespace blr {

using u128 = unsigned __int128;

std::uint64_t facility_cap(std::uint64_t items, std::size_t k, double c_f) {
    const double cap = c_f * static_cast<double>(k) *
                       (1.0 + std::log2(static_cast<double>(std::max<std::uint64_t>(items, 1))));
    // Floor keeps the held count within c_f*k*(1+log2 n) with no slack.
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(cap));
}

namespace {

// P(open) = min(1, w * dist / threshold), decided with exact integers.
bool opens_facility(std::uint64_t weight, std::uint64_t dist,
                    std::uint64_t threshold, SeededRng& rng) {
    const u128 mass = static_cast<u128>(weight) * dist;
    if (mass >= threshold) return true;
    const u128 cut = (mass << 64) / threshold;
    return static_cast<u128>(rng.next_u64()) < cut;
}

struct Facilities {
    std::vector<WeightedPoint> list;
    std::uint64_t threshold = 1;

    // Nearest facility index and distance; list must be non-empty.
    std::pair<std::size_t, std::uint64_t> nearest(const BitRow& p) const {
        std::size_t best = 0;
        std::uint64_t best_dist = hamming(p, list[0].point);
        for (std::size_t i = 1; i < list.size(); ++i) {
            const std::uint64_t dist = hamming(p, list[i].point);
            if (dist < best_dist) {
                best_dist = dist;
                best = i;
            }
        }
        return {best, best_dist};
    }

    void offer(const BitRow& p, std::uint64_t weight, SeededRng& rng) {
        if (list.empty()) {
            list.push_back({p, weight});
            return;
        }
        const auto [idx, dist] = nearest(p);
        if (dist > 0 && opens_facility(weight, dist, threshold, rng))
            list.push_back({p, weight});
        else
            list[idx].weight += weight;
    }

    // Doubles the threshold and replays the facilities onto themselves until
    // the count respects the cap.
    void consolidate(std::uint64_t cap, SeededRng& rng) {
        while (list.size() > cap) {
            threshold *= 2;
            std::vector<WeightedPoint> old;
            old.swap(list);
            for (const auto& wp : old) offer(wp.point, wp.weight, rng);
        }
    }
};

}  // namespace

CoresetResult stream_coreset(PointStream& stream, std::size_t k, SeededRng rng,
                             double coreset_constant) {
    if (k == 0) throw InvalidParameterError("stream_coreset: k must be >= 1");
    Facilities facilities;
    std::uint64_t items = 0;
    std::uint64_t peak = 0;
    stream.for_each_row([&](const BitRow& row) {
        ++items;
        facilities.offer(row, 1, rng);
        facilities.consolidate(facility_cap(items, k, coreset_constant), rng);
        peak = std::max<std::uint64_t>(peak, facilities.list.size());
    });
    if (items == 0) throw EmptyInputError("stream_coreset: empty dataset");
    return {std::move(facilities.list), peak};
}

std::uint64_t weighted_cost(const CenterSet& centers,
                            const std::vector<WeightedPoint>& coreset) {
    std::uint64_t total = 0;
    for (const auto& wp : coreset)
        total += wp.weight * nearest_center(wp.point, centers).second;
    return total;
}

namespace {

// Weighted D^2-style seeding over the coreset: the first center is drawn by
// weight, each next by weight times distance to the chosen ones. Zero total
// mass falls back to a weight-proportional draw.
std::vector<std::size_t> seed_indices(const std::vector<WeightedPoint>& coreset,
                                      std::size_t k, SeededRng& rng) {
    std::vector<std::size_t> chosen;
    std::vector<std::uint64_t> mass(coreset.size());
    for (std::size_t round = 0; round < k; ++round) {
        u128 total = 0;
        for (std::size_t i = 0; i < coreset.size(); ++i) {
            std::uint64_t m = coreset[i].weight;
            if (!chosen.empty()) {
                std::uint64_t dist = std::numeric_limits<std::uint64_t>::max();
                for (auto c : chosen)
                    dist = std::min(dist, hamming(coreset[i].point,
                                                  coreset[c].point));
                m *= dist;
            }
            mass[i] = m;
            total += m;
        }
        if (total == 0)
            for (std::size_t i = 0; i < coreset.size(); ++i) {
                mass[i] = coreset[i].weight;
                total += mass[i];
            }
        u128 pick = (static_cast<u128>(rng.next_u64()) << 64 | rng.next_u64()) %
                    total;
        std::size_t winner = coreset.size() - 1;
        for (std::size_t i = 0; i < coreset.size(); ++i) {
            if (pick < mass[i]) {
                winner = i;
                break;
            }
            pick -= mass[i];
        }
        chosen.push_back(winner);
    }
    return chosen;
}

}  // namespace

CenterSet weighted_kmeans_binary(const std::vector<WeightedPoint>& coreset,
                                 std::size_t k, SeededRng rng) {
    if (coreset.empty())
        throw EmptyInputError("weighted_kmeans_binary: empty coreset");
    if (k == 0)
        throw InvalidParameterError("weighted_kmeans_binary: k must be >= 1");

    const auto seeds = seed_indices(coreset, k, rng);
    std::vector<BitRow> centers;
    centers.reserve(k);
    for (auto idx : seeds) centers.push_back(coreset[idx].point);
    CenterSet current(std::move(centers));
    std::uint64_t current_cost = weighted_cost(current, coreset);

    // Steepest-descent single-center swaps over coreset points.
    const std::size_t max_sweeps = 100 * k;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        std::uint64_t best_cost = current_cost;
        std::size_t best_slot = 0;
        const BitRow* best_point = nullptr;
        for (std::size_t slot = 0; slot < k; ++slot) {
            const BitRow saved = current.centers[slot];
            for (const auto& wp : coreset) {
                if (wp.point == saved) continue;
                current.centers[slot] = wp.point;
                const std::uint64_t cost = weighted_cost(current, coreset);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_slot = slot;
                    best_point = &wp.point;
                }
            }
            current.centers[slot] = saved;
        }
        if (best_point == nullptr) break;
        current.centers[best_slot] = *best_point;
        current_cost = best_cost;
    }
    return current;
}

CenterSet snap_to_data(const CenterSet& centers, PointStream& stream) {
    if (centers.k() == 0)
        throw EmptyInputError("snap_to_data: empty center set");
    if (centers.width() != stream.width())
        throw WidthMismatchError("snap_to_data: center width differs from stream");
    std::vector<BitRow> snapped(centers.k());
    std::vector<std::uint64_t> best(centers.k(),
                                    std::numeric_limits<std::uint64_t>::max());
    std::uint64_t rows = 0;
    stream.for_each_row([&](const BitRow& row) {
        ++rows;
        for (std::size_t j = 0; j < centers.k(); ++j) {
            const std::uint64_t dist = hamming(row, centers.centers[j]);
            if (dist < best[j]) {  // strict: earliest stream point wins ties
                best[j] = dist;
                snapped[j] = row;
            }
        }
    });
    if (rows == 0) throw EmptyInputError("snap_to_data: empty dataset");
    return CenterSet(std::move(snapped));
}

CenterSet baseline_binary_kmeans(PointStream& stream, std::size_t k, SeededRng rng,
                                 double coreset_constant,
                                 std::uint64_t* peak_stored) {
    auto coreset = stream_coreset(stream, k, rng.fork(1), coreset_constant);
    if (peak_stored) *peak_stored = coreset.peak_stored;
    return weighted_kmeans_binary(coreset.points, k, rng.fork(2));
}

}  // namespace blr
