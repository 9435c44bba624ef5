#include "blr/rng.hpp"

namespace blr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t substream)
    : seed_(seed), substream_(substream) {
    std::uint64_t state = seed ^ (substream * 0xD1B54A32D192ED03ull + 1);
    const std::uint32_t words[8] = {
        static_cast<std::uint32_t>(splitmix64(state)),
        static_cast<std::uint32_t>(splitmix64(state)),
        static_cast<std::uint32_t>(splitmix64(state)),
        static_cast<std::uint32_t>(splitmix64(state)),
        static_cast<std::uint32_t>(splitmix64(state)),
        static_cast<std::uint32_t>(splitmix64(state)),
        static_cast<std::uint32_t>(splitmix64(state)),
        static_cast<std::uint32_t>(splitmix64(state)),
    };
    std::seed_seq seq(std::begin(words), std::end(words));
    engine_.seed(seq);
}

std::uint64_t SeededRng::below(std::uint64_t bound) {
    // Rejection above 2^64 mod bound leaves a multiple of bound accepted
    // values, so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t draw = engine_();
        if (draw >= threshold) return draw % bound;
    }
}

}  // namespace blr
