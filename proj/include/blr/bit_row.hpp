#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blr {

//! Widest point dimension accepted by the parsing front-ends unless the
//! caller overrides it. Keeps packed rows a handful of cache lines.
inline constexpr std::size_t kDefaultMaxWidth = 65536;

//! A fixed-width binary vector, packed 64 coordinates per word. Coordinate 0
//! is bit 0 of word 0; bits past the width are always zero. Immutable in
//! spirit: algorithms treat rows as values.
class BitRow {
public:
    BitRow() = default;
    explicit BitRow(std::size_t width)
        : width_(width), words_((width + 63) / 64, 0) {}

    //! Parses a row of '0'/'1' characters. Throws ParseError on anything else.
    static BitRow from_string(std::string_view text);

    std::size_t width() const { return width_; }

    bool bit(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set_bit(std::size_t i, bool value) {
        if (value)
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::uint64_t* word_data() { return words_.data(); }

    std::string to_string() const;

    //! Population count over all coordinates.
    std::size_t popcount() const;

    bool operator==(const BitRow& rhs) const = default;

    //! Total order by coordinate content, earliest coordinate most
    //! significant; used wherever a canonical value ordering is needed.
    bool operator<(const BitRow& rhs) const;

    std::size_t hash() const;

private:
    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitRowHash {
    std::size_t operator()(const BitRow& row) const { return row.hash(); }
};

//! Number of coordinates on which x and y differ; equals the squared
//! Euclidean distance for binary vectors. Throws WidthMismatchError.
std::uint64_t hamming(const BitRow& x, const BitRow& y);

}  // namespace blr
