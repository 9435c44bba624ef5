#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "blr/bit_row.hpp"
#include "blr/stream.hpp"

namespace blr {

//! An ordered list of k centers of equal width. Order matters: coordinate
//! relations constrain the tuple (c_1[i], ..., c_k[i]) by position.
struct CenterSet {
    std::vector<BitRow> centers;

    CenterSet() = default;
    explicit CenterSet(std::vector<BitRow> c) : centers(std::move(c)) {}

    std::size_t k() const { return centers.size(); }
    std::size_t width() const { return centers.empty() ? 0 : centers.front().width(); }

    bool operator==(const CenterSet& rhs) const = default;
};

struct CenterSetHash {
    std::size_t operator()(const CenterSet& cs) const {
        std::size_t h = 0x51ED2701u ^ cs.centers.size();
        for (const auto& c : cs.centers) h = h * 0x100000001B3ull ^ c.hash();
        return h;
    }
};

//! Index and distance of the closest center; ties break to the lowest index.
//! Throws EmptyInputError when the set is empty.
std::pair<std::size_t, std::uint64_t> nearest_center(const BitRow& x,
                                                     const CenterSet& centers);

//! Sum over the stream of the nearest-center distance. Consumes exactly one
//! pass. Throws EmptyInputError on an empty stream or center set.
std::uint64_t cost_phi(const CenterSet& centers, PointStream& stream);

//! Costs of many candidate center sets evaluated in a single pass; entry i
//! equals cost_phi(candidates[i], stream) exactly.
std::vector<std::uint64_t> multi_cost(std::span<const CenterSet> candidates,
                                      PointStream& stream);

//! Coordinate-wise majority vote: bit i is 1 iff strictly more than half the
//! points have a 1 there; exact ties yield 0. The result minimizes the
//! summed Hamming distance over all binary centers.
BitRow majority_center(std::span<const BitRow> points);

}  // namespace blr
