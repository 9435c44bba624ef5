#pragma once

#include <cstdint>
#include <random>

namespace blr {

//! Deterministic random source: the same (seed, substream) pair always
//! produces the same draw sequence, and distinct substreams behave as
//! independent generators. Every randomized algorithm in the library takes
//! one of these so whole runs replay bit-exactly.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t substream = 0);

    std::uint64_t next_u64() { return engine_(); }

    //! Unbiased uniform draw in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);

    //! Derives an independent generator keyed off the same base seed. The
    //! child's identity mixes in this generator's own substream, so forks of
    //! forks stay distinct.
    SeededRng fork(std::uint64_t substream) const {
        return SeededRng(seed_,
                         substream_ * 0x9E3779B97F4A7C15ull + substream + 1);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t substream_;
    std::mt19937_64 engine_;
};

}  // namespace blr
