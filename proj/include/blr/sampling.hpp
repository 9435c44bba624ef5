#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blr/center_set.hpp"
#include "blr/rng.hpp"
#include "blr/stream.hpp"

namespace blr {

//! Squared distance of x to its closest center in B, which over binary
//! vectors is just the minimum Hamming distance.
std::uint64_t d2_weight(const BitRow& x, const CenterSet& b);

//! m independent single-slot weighted reservoirs fed by one pass: slot s
//! holds item t with probability weight_t / (total weight), by replacing the
//! stored element with probability weight_t / (running weight). A parallel
//! bank of unit-weight slots backs the zero-total-weight fallback.
//!
//! Acceptance draws use exact integer arithmetic: a uniform 64-bit value is
//! compared against weight * 2^64 / running_total computed in 128 bits, so
//! there is no floating-point bias for the statistical tests to absorb.
class ReservoirBank {
public:
    ReservoirBank(std::size_t slots, SeededRng rng);

    void offer(const BitRow& row, std::uint64_t weight);

    std::uint64_t items_seen() const { return items_; }
    std::uint64_t total_weight() const { return total_weight_; }

    //! Weighted samples when any weight was positive, otherwise the uniform
    //! fallback samples. Throws EmptyInputError before any item was offered.
    std::vector<BitRow> take() const;

private:
    std::vector<std::optional<BitRow>> slots_;
    std::vector<std::optional<BitRow>> fallback_;
    std::uint64_t total_weight_ = 0;
    std::uint64_t items_ = 0;
    SeededRng rng_;
};

//! One pass of D^2 sampling with respect to the center set b: returns m
//! mutually independent draws, each over points x with probability
//! d2_weight(x, b) / sum of weights. Falls back to uniform draws when every
//! point sits on a center.
std::vector<BitRow> d2_reservoir_sample(PointStream& stream, const CenterSet& b,
                                        std::size_t m, SeededRng rng);

}  // namespace blr
