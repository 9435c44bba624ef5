#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blr/center_set.hpp"
#include "blr/lowrank.hpp"
#include "blr/relations.hpp"

namespace blr {

//! Guard rails for the exhaustive solvers. Limits apply to distinct points
//! (duplicates are folded into multiplicities first, which never changes an
//! optimum), so small-alphabet instances with many repeated rows stay
//! solvable. The operation budget is a hard cap on elementary work.
struct OracleLimits {
    std::size_t max_distinct = 8;
    std::size_t max_d = 8;
    std::size_t max_k = 3;
    std::size_t max_r = 2;
    std::uint64_t op_budget = 1'000'000'000;
};

struct ExactKmeansResult {
    CenterSet centers;
    std::uint64_t opt = 0;
};

//! Certified optimum of the constrained instance by enumerating every
//! assignment of distinct points to the k (distinguishable) clusters and,
//! per assignment, scanning each coordinate's allowed tuples for the one
//! with the fewest weighted mismatches. Obviously correct and nothing else.
ExactKmeansResult exact_constrained_kmeans(std::span<const BitRow> points,
                                           std::size_t k,
                                           const RelationSet& relations,
                                           const OracleLimits& limits = {});

//! Unconstrained optimum: the same enumeration with every tuple allowed.
ExactKmeansResult exact_binary_kmeans(std::span<const BitRow> points,
                                      std::size_t k,
                                      const OracleLimits& limits = {});

//! Certified optimum of the rank-r problem: enumerates every V and, for
//! each, the best row of U per data row (the row-wise choice is independent,
//! so this covers every U). Returns a minimizing factorization; its error
//! field is the optimum.
Factorization exact_lowrank(std::span<const BitRow> rows, std::size_t r,
                            const InnerProduct& f,
                            const OracleLimits& limits = {});

}  // namespace blr
