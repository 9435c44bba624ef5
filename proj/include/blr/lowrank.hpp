#pragma once

#include <cstdint>
#include <vector>

#include "blr/ptas.hpp"
#include "blr/relations.hpp"
#include "blr/stream.hpp"

namespace blr {

//! A rank-r binary factorization: U is n x r (one row per data row), V is
//! r x d, and error counts the entries where A and U*V disagree under the
//! instance's inner product.
struct Factorization {
    std::vector<BitRow> u_rows;  // n rows of width r
    std::vector<BitRow> v_rows;  // r rows of width d
    std::uint64_t error = 0;
};

//! The constrained k-means instance a rank-r problem reduces to: k = 2^r
//! clusters indexed by the lambda vectors (all of {0,1}^r in ascending
//! lexicographic order), and one uniform relation listing every column
//! pattern a factorization can realize, each with its generating witness.
struct ReducedInstance {
    std::size_t k = 0;
    RelationSet relations;
    std::vector<std::uint32_t> lambdas;
};

//! Builds the reduction for a width-d row stream. The stream itself is the
//! point set, unchanged.
ReducedInstance reduce_to_kmeans(std::size_t d, std::size_t r,
                                 const InnerProduct& f,
                                 std::size_t max_rank = kDefaultMaxRank);

//! Witness per coordinate for a feasible center set: the r-bit vector whose
//! tuple matches the centers' bits at that coordinate. Throws
//! MissingWitnessError if a matching tuple has no stored witness.
std::vector<std::uint32_t> witnesses_for(const CenterSet& centers,
                                         const RelationSet& relations);

//! Assembles U from cluster labels (row t becomes lambda_{labels[t]}) and V
//! from the per-coordinate witnesses (column i becomes witnesses[i]). Row t
//! of U*V then equals center labels[t] bit-exactly; the error field is left
//! for the caller to fill.
Factorization reconstruct_factors(const std::vector<std::size_t>& labels,
                                  const std::vector<std::uint32_t>& witnesses,
                                  std::size_t r);

//! One pass over the rows of A counting entries that differ from U*V under
//! f. Throws ShapeMismatchError when dimensions disagree.
std::uint64_t l0_error(PointStream& a, const Factorization& factors,
                       const InnerProduct& f);

struct LowRankResult {
    Factorization factorization;
    CenterSet centers;
    std::vector<std::size_t> labels;
    GoodCentersDiagnostics diagnostics;
    std::uint64_t baseline_peak_stored = 0;
};

//! The four-pass pipeline: reduce to constrained k-means, one pass for the
//! baseline solution, two passes for the candidate search, and one pass to
//! label rows; factors are then reconstructed offline. The returned error
//! equals the clustering cost of the chosen centers exactly.
LowRankResult lowrank_approx(PointStream& a, std::size_t r, const InnerProduct& f,
                             const PtasParams& params, SeededRng rng,
                             std::size_t max_rank = kDefaultMaxRank,
                             double coreset_constant = 8.0);

}  // namespace blr
