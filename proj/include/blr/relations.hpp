#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blr/center_set.hpp"

namespace blr {

//! Largest supported rank for low-rank relation construction unless the
//! caller raises it; k = 2^r centers beyond this are useless at desk scale.
inline constexpr std::size_t kDefaultMaxRank = 6;

//! Largest k for which "*" (all 2^k tuples) may be materialized.
inline constexpr std::size_t kMaxStarExpansion = 20;

enum class InnerProductKind { gf2, boolean, table };

//! An inner product on {0,1}^r: GF(2) is the parity of the coordinate-wise
//! AND, the Boolean semiring is its OR, and a table spells out all
//! 2^r x 2^r values. Operands are r-bit vectors encoded as integers with
//! the first coordinate in the most significant bit, so ascending integer
//! order is ascending lexicographic order over {0,1}^r.
class InnerProduct {
public:
    static InnerProduct gf2(std::size_t r);
    static InnerProduct boolean(std::size_t r);
    //! entries[x * 2^r + y] = value at (row x, column y).
    static InnerProduct table(std::size_t r, std::vector<bool> entries);

    //! Evaluates <x, y>; both operands must lie below 2^r.
    int operator()(std::uint32_t x, std::uint32_t y) const;

    std::size_t rank() const { return r_; }
    InnerProductKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

private:
    InnerProduct(InnerProductKind kind, std::size_t r, std::string name)
        : kind_(kind), r_(r), name_(std::move(name)) {}

    InnerProductKind kind_;
    std::size_t r_;
    std::string name_;
    std::vector<bool> table_;
};

//! One allowed k-bit tuple at a coordinate: bit j-1 of `tuple` is the bit
//! prescribed for center j. The witness, when present, is the r-bit vector
//! that generated the tuple in a low-rank relation.
struct RelationEntry {
    std::uint64_t tuple = 0;
    std::optional<std::uint32_t> witness;

    bool operator==(const RelationEntry&) const = default;
};

//! Per-coordinate sets of allowed center-bit tuples. Lists are sorted by
//! tuple value with duplicates removed; a uniform relation shares one list
//! across all d coordinates.
class RelationSet {
public:
    //! Uniform relation: one list for every coordinate.
    RelationSet(std::size_t k, std::size_t d, std::vector<RelationEntry> shared);
    //! Per-coordinate lists; per_coord.size() must equal d.
    RelationSet(std::size_t k, std::vector<std::vector<RelationEntry>> per_coord);

    static RelationSet unconstrained(std::size_t k, std::size_t d);

    std::size_t k() const { return k_; }
    std::size_t d() const { return d_; }
    bool uniform() const { return uniform_; }

    const std::vector<RelationEntry>& coord(std::size_t i) const {
        return uniform_ ? lists_[0] : lists_[i];
    }

    //! Membership test at one coordinate (binary search).
    bool allows(std::size_t i, std::uint64_t tuple) const;

    //! Witness of the entry carrying `tuple` at coordinate i; nullopt when
    //! the tuple is absent or carries no witness.
    std::optional<std::uint32_t> witness_for(std::size_t i, std::uint64_t tuple) const;

    std::uint64_t total_tuples() const;  // sum of |R_i| over coordinates

    bool operator==(const RelationSet&) const = default;

private:
    void normalize_and_check();

    std::size_t k_;
    std::size_t d_;
    bool uniform_;
    std::vector<std::vector<RelationEntry>> lists_;
};

//! Evaluates the inner product; widths of both operands must be f.rank().
int inner_product(std::uint32_t x, std::uint32_t y, const InnerProduct& f);

//! The relation of all column patterns a rank-r factorization can produce:
//! lambda_1..lambda_k enumerate {0,1}^r in ascending lexicographic order and
//! each x in {0,1}^r contributes the tuple (<lambda_1, x>, ..., <lambda_k, x>)
//! with witness x. Duplicate tuples keep the smallest witness; the result is
//! sorted by tuple. For the symmetric gf2/boolean products the tuple equals
//! (<x, lambda_1>, ..., <x, lambda_k>) as well.
std::vector<RelationEntry> build_lowrank_relation(
    std::size_t r, const InnerProduct& f, std::size_t max_rank = kDefaultMaxRank);

//! True iff at every coordinate i the tuple read off the centers appears in
//! R_i. Throws ShapeMismatchError when k or widths disagree.
bool validate_center_set(const CenterSet& centers, const RelationSet& relations);

//! Parses the relations text format:
//!   k=<int> d=<int>
//!   uniform: <tuples-or-*>
//! or d lines "coord <i>: <tuples-or-*>" with i = 1..d in order. Tuples are
//! k-character binary strings read left-to-right as (c_1[i], ..., c_k[i]);
//! "*" expands to all 2^k tuples; '#' starts a comment.
RelationSet parse_relations(std::string_view text);

std::string serialize_relations(const RelationSet& relations);

}  // namespace blr
