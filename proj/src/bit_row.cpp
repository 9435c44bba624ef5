#include "blr/bit_row.hpp"

#include <bit>

#include "blr/errors.hpp"

namespace blr {

BitRow BitRow::from_string(std::string_view text) {
    BitRow row(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1')
            row.set_bit(i, true);
        else if (text[i] != '0')
            throw ParseError("invalid character '" + std::string(1, text[i]) +
                             "' in binary row");
    }
    return row;
}

std::string BitRow::to_string() const {
    std::string out(width_, '0');
    for (std::size_t i = 0; i < width_; ++i)
        if (bit(i)) out[i] = '1';
    return out;
}

std::size_t BitRow::popcount() const {
    std::size_t total = 0;
    for (auto w : words_) total += std::popcount(w);
    return total;
}

bool BitRow::operator<(const BitRow& rhs) const {
    if (width_ != rhs.width_) return width_ < rhs.width_;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        const std::uint64_t diff = words_[i] ^ rhs.words_[i];
        if (diff != 0) {
            // Earliest differing coordinate decides; a zero bit sorts first.
            const int idx = std::countr_zero(diff);
            return ((words_[i] >> idx) & 1u) == 0;
        }
    }
    return false;
}

std::size_t BitRow::hash() const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ width_;
    for (auto w : words_) {
        h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h *= 0xFF51AFD7ED558CCDull;
    }
    return static_cast<std::size_t>(h);
}

std::uint64_t hamming(const BitRow& x, const BitRow& y) {
    if (x.width() != y.width())
        throw WidthMismatchError("hamming distance requires equal widths");
    std::uint64_t total = 0;
    const auto xw = x.words();
    const auto yw = y.words();
    for (std::size_t i = 0; i < xw.size(); ++i)
        total += std::popcount(xw[i] ^ yw[i]);
    return total;
}

}  // namespace blr
