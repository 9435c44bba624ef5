#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "blr/big_uint.hpp"
#include "blr/center_set.hpp"
#include "blr/relations.hpp"
#include "blr/rng.hpp"
#include "blr/stream.hpp"
#include "blr/subset_enum.hpp"

namespace blr {

//! A nonnegative rational in lowest terms. Accuracy parameters are kept
//! exact so the weight grid and candidate costs never hit float ties.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Ratio of(std::uint64_t num, std::uint64_t den);
    //! Accepts "0.25", ".5", or "1/3". Throws InvalidParameterError.
    static Ratio parse(std::string_view text);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Ratio&) const = default;
};

//! Knobs of the candidate search. The defaults from default_params() follow
//! tau = ceil((k/eps^2) * ln(k/eps)), eta = ceil(tau*alpha*k/eps^2) and
//! zeta = ceil(32/eps), every proportionality constant pinned to one; they
//! are astronomically expensive at realistic sizes, so each field can be
//! overridden independently.
struct PtasParams {
    Ratio epsilon;
    std::uint64_t tau = 1;
    std::uint64_t eta = 1;
    std::uint64_t zeta = 1;
    double alpha = 1.0;
    std::optional<std::uint64_t> candidate_budget;
};

//! Validates epsilon in (0, 1/2] and fills the default tau/eta/zeta.
PtasParams default_params(std::size_t k, Ratio epsilon, double alpha);

//! The geometric size grid {(1+eps/2)^j : j = 0..J} with J minimal such that
//! the top value reaches n, held as exact rationals p^j / q^j. Every integer
//! s in [1, n] has a grid value w with s <= w <= (1+eps/2)*s.
class WeightGrid {
public:
    WeightGrid(std::uint64_t n, Ratio epsilon);

    std::size_t size() const { return numerators_.size(); }
    std::uint64_t base_num() const { return base_num_; }
    std::uint64_t base_den() const { return base_den_; }
    const BigUint& numerator(std::size_t j) const { return numerators_[j]; }
    const BigUint& denominator(std::size_t j) const { return denominators_[j]; }

    //! Integer weights proportional to the grid values at the given
    //! exponents: value j scaled by the common denominator q^(max exponent).
    std::vector<BigUint> cleared_weights(std::span<const std::size_t> exponents) const;

private:
    std::uint64_t base_num_;
    std::uint64_t base_den_;
    std::vector<BigUint> numerators_;
    std::vector<BigUint> denominators_;
};

//! The per-coordinate optimizer: for every coordinate i independently,
//! selects the tuple (b_1, ..., b_k) allowed at i minimizing
//!   f_i = sum_{j: b_j = 1} w_j * |{x in S_j : x[i] = 0}|
//!       + sum_{j: b_j = 0} w_j * |{x in S_j : x[i] = 1}|
//! with ties broken to the numerically smallest tuple, and assembles the
//! selected bits into k centers. The result always satisfies the relations.
CenterSet best_centers(const RelationSet& relations,
                       std::span<const std::vector<BitRow>> samples,
                       std::span<const BigUint> weights);

//! Convenience overload for plain integer weights.
CenterSet best_centers(const RelationSet& relations,
                       std::span<const std::vector<BitRow>> samples,
                       std::span<const std::uint64_t> weights);

struct GoodCentersDiagnostics {
    std::uint64_t candidates_generated = 0;  // optimizer invocations
    std::uint64_t candidates_distinct = 0;   // after deduplication
    std::uint64_t subsets_enumerated = 0;
    std::uint64_t grid_size = 0;
    bool budget_truncated = false;
    std::uint64_t passes_consumed = 0;
};

struct GoodCentersResult {
    CenterSet centers;
    std::uint64_t cost = 0;
    GoodCentersDiagnostics diagnostics;
};

//! The candidate search around a constant-factor solution `baseline`, in
//! exactly two stream passes. Pass A draws zeta independent batches of
//! eta*k points by distance-squared sampling w.r.t. the baseline, all from
//! one reservoir bank. Offline, each batch is joined with tau*k copies of
//! every baseline center; every (disjoint subset tuple, weight tuple)
//! combination feeds the per-coordinate optimizer and the resulting center
//! sets are pooled (deduplicated). Pass B costs all candidates at once and
//! the cheapest one wins, first-generated on ties.
//!
//! A candidate_budget caps the (subset, weight) combinations per repetition:
//! the first half in deterministic order, the rest drawn uniformly from the
//! remainder. The stream's size must already be known (the pass that
//! produced the baseline makes it so).
GoodCentersResult good_centers(
    PointStream& stream, const RelationSet& relations, const CenterSet& baseline,
    const PtasParams& params, SeededRng rng,
    const std::function<void(const CenterSet&)>& candidate_observer = nullptr);

//! One labelling pass: entry t is the index of the center closest to row t.
std::vector<std::size_t> assign_clusters(PointStream& stream,
                                         const CenterSet& centers);

}  // namespace blr
