#include "blr/sampling.hpp"

#include "blr/errors.hpp"

namespace blr {

using u128 = unsigned __int128;

std::uint64_t d2_weight(const BitRow& x, const CenterSet& b) {
    return nearest_center(x, b).second;
}

ReservoirBank::ReservoirBank(std::size_t slots, SeededRng rng)
    : slots_(slots), fallback_(slots), rng_(std::move(rng)) {
    if (slots == 0)
        throw InvalidParameterError("ReservoirBank: need at least one slot");
}

void ReservoirBank::offer(const BitRow& row, std::uint64_t weight) {
    ++items_;
    if (weight > 0) {
        total_weight_ += weight;
        // P(replace) = weight / running total, exactly 1 for the first
        // positive-weight item.
        const u128 threshold =
            (static_cast<u128>(weight) << 64) / total_weight_;
        for (auto& slot : slots_)
            if (static_cast<u128>(rng_.next_u64()) < threshold) slot = row;
    }
    const u128 uniform_threshold = (static_cast<u128>(1) << 64) / items_;
    for (auto& slot : fallback_)
        if (static_cast<u128>(rng_.next_u64()) < uniform_threshold) slot = row;
}

std::vector<BitRow> ReservoirBank::take() const {
    if (items_ == 0)
        throw EmptyInputError("ReservoirBank: no items offered");
    const auto& source = total_weight_ > 0 ? slots_ : fallback_;
    std::vector<BitRow> out;
    out.reserve(source.size());
    for (const auto& slot : source) out.push_back(*slot);
    return out;
}

std::vector<BitRow> d2_reservoir_sample(PointStream& stream, const CenterSet& b,
                                        std::size_t m, SeededRng rng) {
    if (m == 0) throw InvalidParameterError("d2_reservoir_sample: m must be >= 1");
    if (b.k() == 0) throw EmptyInputError("d2_reservoir_sample: empty center set");
    ReservoirBank bank(m, std::move(rng));
    stream.for_each_row(
        [&](const BitRow& row) { bank.offer(row, d2_weight(row, b)); });
    if (bank.items_seen() == 0)
        throw EmptyInputError("d2_reservoir_sample: empty dataset");
    return bank.take();
}

}  // namespace blr
