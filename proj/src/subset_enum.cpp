#include "blr/subset_enum.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "blr/errors.hpp"

namespace blr {

namespace {

constexpr std::uint64_t kMaxCountStates = 1u << 22;

std::pair<std::vector<BitRow>, std::vector<std::uint32_t>> tally(
    std::span<const BitRow> multiset) {
    std::map<BitRow, std::uint32_t> counts;
    for (const auto& row : multiset) ++counts[row];
    std::vector<BitRow> values;
    std::vector<std::uint32_t> mults;
    values.reserve(counts.size());
    mults.reserve(counts.size());
    for (auto& [value, count] : counts) {
        values.push_back(value);
        mults.push_back(count);
    }
    return {std::move(values), std::move(mults)};
}

}  // namespace

SubsetEnumerator::SubsetEnumerator(std::span<const BitRow> multiset, std::size_t k,
                                   std::size_t tau) {
    auto [values, counts] = tally(multiset);
    *this = SubsetEnumerator(std::move(values), std::move(counts), k, tau);
}

SubsetEnumerator::SubsetEnumerator(std::vector<BitRow> values,
                                   std::vector<std::uint32_t> counts,
                                   std::size_t k, std::size_t tau)
    : values_(std::move(values)), caps_(std::move(counts)), k_(k), tau_(tau) {
    if (k_ == 0 || tau_ == 0)
        throw InvalidParameterError("subset enumeration needs k >= 1 and tau >= 1");
    if (values_.size() != caps_.size())
        throw InvalidParameterError("subset enumeration: values/counts mismatch");
    std::uint64_t total = 0;
    const std::uint64_t cap = static_cast<std::uint64_t>(k_) * tau_;
    for (auto& c : caps_) {
        total += c;
        c = static_cast<std::uint32_t>(std::min<std::uint64_t>(c, cap));
    }
    if (total < cap)
        throw InvalidParameterError("insufficient elements: |M| < k*tau");
    suffix_cap_.assign(values_.size() + 1, 0);
    for (std::size_t i = values_.size(); i-- > 0;)
        suffix_cap_[i] = suffix_cap_[i + 1] + caps_[i];
}

std::size_t SubsetEnumerator::state_index(
    std::span<const std::uint32_t> remaining) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k_; ++j) idx = idx * (tau_ + 1) + remaining[j];
    return idx;
}

void SubsetEnumerator::enumerate(
    const std::function<bool(const Alloc&)>& visit) const {
    std::vector<std::uint32_t> remaining(k_, static_cast<std::uint32_t>(tau_));
    std::uint64_t total_remaining = static_cast<std::uint64_t>(k_) * tau_;
    Alloc current(k_);
    bool stopped = false;

    // alloc_value chooses, for one value, how many copies each subset takes,
    // larger first; descend_value advances to the next value.
    std::function<void(std::size_t)> descend_value;
    std::function<void(std::size_t, std::size_t, std::uint32_t)> alloc_value;

    descend_value = [&](std::size_t i) {
        if (stopped) return;
        if (total_remaining > suffix_cap_[i]) return;  // dead branch
        if (total_remaining == 0) {
            stopped = !visit(current);
            return;
        }
        // total_remaining > 0, so i < m here.
        alloc_value(i, 0, caps_[i]);
    };

    alloc_value = [&](std::size_t i, std::size_t j, std::uint32_t cap_left) {
        if (stopped) return;
        if (j == k_) {
            descend_value(i + 1);
            return;
        }
        const std::uint32_t top = std::min<std::uint32_t>(cap_left, remaining[j]);
        for (std::uint32_t take = top + 1; take-- > 0;) {
            if (take > 0) {
                remaining[j] -= take;
                total_remaining -= take;
                current[j].emplace_back(static_cast<std::uint32_t>(i), take);
            }
            alloc_value(i, j + 1, cap_left - take);
            if (take > 0) {
                remaining[j] += take;
                total_remaining += take;
                current[j].pop_back();
            }
            if (stopped) return;
        }
    };

    descend_value(0);
}

void SubsetEnumerator::ensure_counts() const {
    if (counts_built_) return;
    const std::size_t m = values_.size();
    std::uint64_t states = 1;
    for (std::size_t j = 0; j < k_; ++j) {
        states *= tau_ + 1;
        if (states > kMaxCountStates)
            throw LimitsExceededError(
                "subset budget machinery: (tau+1)^k state space too large");
    }
    if ((m + 1) * states > (std::uint64_t{1} << 26))
        throw LimitsExceededError("subset budget machinery: count table too large");

    counts_.assign((m + 1) * states, BigUint());
    const auto radix = tau_ + 1;

    // Base layer: only the all-zero state completes.
    counts_[m * states + 0] = BigUint(1);

    std::vector<std::uint32_t> remaining(k_, 0);
    for (std::size_t i = m; i-- > 0;) {
        for (std::uint64_t s = 0; s < states; ++s) {
            // Decode the state into per-subset remaining needs.
            std::uint64_t acc = s;
            std::uint64_t total_remaining = 0;
            for (std::size_t j = k_; j-- > 0;) {
                remaining[j] = static_cast<std::uint32_t>(acc % radix);
                total_remaining += remaining[j];
                acc /= radix;
            }
            if (total_remaining > suffix_cap_[i]) continue;
            BigUint sum;
            // Enumerate allocations of value i against this state.
            std::function<void(std::size_t, std::uint32_t, std::uint64_t)> walk =
                [&](std::size_t j, std::uint32_t cap_left, std::uint64_t child) {
                    if (j == k_) {
                        sum += counts_[(i + 1) * states + child];
                        return;
                    }
                    const std::uint32_t top =
                        std::min<std::uint32_t>(cap_left, remaining[j]);
                    for (std::uint32_t take = 0; take <= top; ++take)
                        walk(j + 1, cap_left - take,
                             child * radix + (remaining[j] - take));
                    // child accumulates the mixed-radix index of the next state.
                };
            walk(0, caps_[i], 0);
            counts_[i * states + s] = std::move(sum);
        }
    }
    counts_built_ = true;
}

const BigUint& SubsetEnumerator::total_count() const {
    ensure_counts();
    std::vector<std::uint32_t> full(k_, static_cast<std::uint32_t>(tau_));
    return counts_[state_index(full)];  // layer 0
}

SubsetEnumerator::Alloc SubsetEnumerator::unrank(BigUint rank) const {
    ensure_counts();
    const std::size_t m = values_.size();
    const std::size_t states = counts_.size() / (m + 1);
    const auto radix = tau_ + 1;

    std::vector<std::uint32_t> remaining(k_, static_cast<std::uint32_t>(tau_));
    Alloc out(k_);
    if (rank >= counts_[state_index(remaining)])
        throw InvalidParameterError("subset unrank: rank out of range");

    for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t total_remaining = 0;
        for (auto r : remaining) total_remaining += r;
        if (total_remaining == 0) break;
        // Find the allocation vector (larger takes first) whose subtree
        // contains `rank`.
        std::vector<std::uint32_t> take(k_, 0);
        bool placed = false;
        std::function<void(std::size_t, std::uint32_t, std::uint64_t)> walk =
            [&](std::size_t j, std::uint32_t cap_left, std::uint64_t child) {
                if (placed) return;
                if (j == k_) {
                    const BigUint& below = counts_[(i + 1) * states + child];
                    if (rank < below) {
                        placed = true;
                    } else {
                        rank -= below;
                    }
                    return;
                }
                const std::uint32_t top =
                    std::min<std::uint32_t>(cap_left, remaining[j]);
                for (std::uint32_t t = top + 1; t-- > 0;) {
                    take[j] = t;
                    walk(j + 1, cap_left - t, child * radix + (remaining[j] - t));
                    if (placed) return;
                }
            };
        walk(0, caps_[i], 0);
        if (!placed)
            throw InvalidParameterError("subset unrank: rank out of range");
        for (std::size_t j = 0; j < k_; ++j) {
            if (take[j] > 0) {
                out[j].emplace_back(static_cast<std::uint32_t>(i), take[j]);
                remaining[j] -= take[j];
            }
        }
    }
    return out;
}

std::vector<std::vector<BitRow>> SubsetEnumerator::materialize(
    const Alloc& alloc) const {
    std::vector<std::vector<BitRow>> out(k_);
    for (std::size_t j = 0; j < k_; ++j) {
        out[j].reserve(tau_);
        for (const auto& [value_idx, copies] : alloc[j])
            for (std::uint32_t c = 0; c < copies; ++c)
                out[j].push_back(values_[value_idx]);
    }
    return out;
}

std::vector<std::vector<std::vector<BitRow>>> enumerate_subsets(
    std::span<const BitRow> multiset, std::size_t k, std::size_t tau,
    std::optional<std::uint64_t> budget, SeededRng& rng) {
    if (budget && *budget == 0)
        throw InvalidParameterError("enumerate_subsets: budget must be positive");
    SubsetEnumerator enumerator(multiset, k, tau);
    std::vector<std::vector<std::vector<BitRow>>> out;

    if (!budget) {
        enumerator.enumerate([&](const SubsetEnumerator::Alloc& alloc) {
            out.push_back(enumerator.materialize(alloc));
            return true;
        });
        return out;
    }

    const BigUint& total = enumerator.total_count();
    if (total <= BigUint(*budget)) {
        enumerator.enumerate([&](const SubsetEnumerator::Alloc& alloc) {
            out.push_back(enumerator.materialize(alloc));
            return true;
        });
        return out;
    }

    const std::uint64_t prefix = (*budget + 1) / 2;
    const std::uint64_t random_part = *budget / 2;
    out.reserve(prefix + random_part);
    std::uint64_t emitted = 0;
    enumerator.enumerate([&](const SubsetEnumerator::Alloc& alloc) {
        out.push_back(enumerator.materialize(alloc));
        return ++emitted < prefix;
    });

    // Distinct uniform ranks from the non-prefix remainder, visited in
    // sorted order so the result is deterministic for a given seed.
    BigUint span = total;
    span -= BigUint(prefix);
    std::set<BigUint> ranks;
    while (ranks.size() < random_part) {
        BigUint r = BigUint::random_below(span, [&] { return rng.next_u64(); });
        r += BigUint(prefix);
        ranks.insert(std::move(r));
    }
    for (const auto& rank : ranks)
        out.push_back(enumerator.materialize(enumerator.unrank(rank)));
    return out;
}

}  // namespace blr
