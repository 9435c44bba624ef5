#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "blr/big_uint.hpp"
#include "blr/bit_row.hpp"
#include "blr/rng.hpp"

namespace blr {

//! Enumerates k-tuples (S_1, ..., S_k) of disjoint tau-sized sub-multisets
//! of a multiset M, one tuple per distinct value assignment. A tuple is
//! canonically encoded as its allocation matrix: for each distinct value in
//! ascending order, how many copies each subset takes. Tuples are visited in
//! lexicographic order of that encoding with larger allocations first, so
//! S_1 = {a, a} precedes S_1 = {a, b}.
//!
//! Multiplicities are capped at k*tau: no tuple can use more copies of one
//! value, so the visited set is unchanged and the per-value state stays
//! small enough to count and unrank exactly.
class SubsetEnumerator {
public:
    //! Per subset, the (value index, copies) pairs in ascending value order.
    using Alloc = std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>;

    SubsetEnumerator(std::span<const BitRow> multiset, std::size_t k,
                     std::size_t tau);
    //! Directly from distinct values (ascending) and their multiplicities.
    SubsetEnumerator(std::vector<BitRow> values, std::vector<std::uint32_t> counts,
                     std::size_t k, std::size_t tau);

    const std::vector<BitRow>& values() const { return values_; }
    std::size_t k() const { return k_; }
    std::size_t tau() const { return tau_; }

    //! Visits tuples in canonical order until the visitor returns false.
    void enumerate(const std::function<bool(const Alloc&)>& visit) const;

    //! Exact number of tuples. Builds the count table on first use.
    const BigUint& total_count() const;

    //! The tuple at 0-based `rank` in canonical order.
    Alloc unrank(BigUint rank) const;

    //! Expands an allocation into the k sub-multisets, each sorted ascending.
    std::vector<std::vector<BitRow>> materialize(const Alloc& alloc) const;

private:
    void ensure_counts() const;
    std::size_t state_index(std::span<const std::uint32_t> remaining) const;

    std::vector<BitRow> values_;
    std::vector<std::uint32_t> caps_;
    std::vector<std::uint64_t> suffix_cap_;
    std::size_t k_;
    std::size_t tau_;
    // counts_[i * states + s]: completions from value i with remaining-need
    // state s (mixed radix tau+1 per subset).
    mutable std::vector<BigUint> counts_;
    mutable bool counts_built_ = false;
};

//! All tuples when they number at most `budget` (or no budget is given);
//! otherwise the first ceil(budget/2) in canonical order plus floor(budget/2)
//! distinct tuples drawn uniformly from the rest. Throws
//! InvalidParameterError when |M| < k*tau or budget == 0.
std::vector<std::vector<std::vector<BitRow>>> enumerate_subsets(
    std::span<const BitRow> multiset, std::size_t k, std::size_t tau,
    std::optional<std::uint64_t> budget, SeededRng& rng);

}  // namespace blr
