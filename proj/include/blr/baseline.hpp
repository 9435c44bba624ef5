#pragma once

#include <cstdint>
#include <vector>

#include "blr/center_set.hpp"
#include "blr/rng.hpp"
#include "blr/stream.hpp"

namespace blr {

//! A stream point with a positive multiplicity.
struct WeightedPoint {
    BitRow point;
    std::uint64_t weight = 1;
};

struct CoresetResult {
    std::vector<WeightedPoint> points;
    //! Largest facility count held at any item boundary during the pass.
    std::uint64_t peak_stored = 0;
};

//! Facility-budget cap: floor(c_f * k * (1 + log2(items))), at least 1.
std::uint64_t facility_cap(std::uint64_t items, std::size_t k, double c_f);

//! One-pass weighted summary by online facility location with doubling:
//! a point opens a facility with probability min(1, dist / L) and otherwise
//! adds its weight to the nearest facility; whenever the facility count
//! exceeds the cap, L doubles and the facilities re-cluster onto themselves
//! by the same rule (a weight-w facility opens with min(1, w * dist / L)).
//! Every returned point appeared on the stream and the weights sum to n.
CoresetResult stream_coreset(PointStream& stream, std::size_t k, SeededRng rng,
                             double coreset_constant = 8.0);

//! Discrete weighted k-means on a coreset: centers are coreset points,
//! seeded by weighted distance-squared sampling and then improved by single
//! center swaps until no swap lowers the weighted cost (bounded sweeps).
//! Duplicate centers are allowed when k exceeds the distinct points.
CenterSet weighted_kmeans_binary(const std::vector<WeightedPoint>& coreset,
                                 std::size_t k, SeededRng rng);

//! Weighted clustering cost of a center set over a coreset.
std::uint64_t weighted_cost(const CenterSet& centers,
                            const std::vector<WeightedPoint>& coreset);

//! One pass replacing each center by the stream point nearest to it
//! (earliest on ties). The result C' satisfies cost(C') <= 4 * cost(C).
CenterSet snap_to_data(const CenterSet& centers, PointStream& stream);

//! The one-pass constant-factor solver for the unconstrained instance:
//! stream_coreset followed by offline reclustering. Output centers are
//! genuine stream points, so no extra snapping pass is needed.
CenterSet baseline_binary_kmeans(PointStream& stream, std::size_t k, SeededRng rng,
                                 double coreset_constant = 8.0,
                                 std::uint64_t* peak_stored = nullptr);

}  // namespace blr
