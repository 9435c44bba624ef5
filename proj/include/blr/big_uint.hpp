#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace blr {

//! Arbitrary-precision unsigned integer with the minimal operation set the
//! exact weight-grid arithmetic and subset unranking need: addition,
//! subtraction, multiplication by a 64-bit value, division by a 64-bit
//! value, and comparison. Little-endian 64-bit limbs, no trailing zeros.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v);  // intentionally implicit

    static BigUint pow(std::uint64_t base, std::uint64_t exp);

    bool is_zero() const { return limbs_.empty(); }
    bool fits_u64() const { return limbs_.size() <= 1; }
    std::uint64_t to_u64() const;  // throws LimitsExceededError if too large
    double to_double() const;      // lossy, for diagnostics only
    std::string to_decimal_string() const;

    BigUint& operator+=(const BigUint& rhs);
    BigUint& operator-=(const BigUint& rhs);  // requires *this >= rhs
    BigUint& mul_u64(std::uint64_t m);
    //! Divides in place by m (m > 0); returns the remainder.
    std::uint64_t divmod_u64(std::uint64_t m);

    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
    friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }
    friend BigUint operator*(BigUint a, std::uint64_t m) { return a.mul_u64(m); }
    friend BigUint operator*(const BigUint& a, const BigUint& b);

    std::strong_ordering operator<=>(const BigUint& rhs) const;
    bool operator==(const BigUint& rhs) const = default;

    std::size_t limb_count() const { return limbs_.size(); }

    //! Uniform draw in [0, bound); `draw_word` must yield independent
    //! uniform 64-bit words. Rejection sampling with a masked top limb.
    template <typename WordSource>
    static BigUint random_below(const BigUint& bound, WordSource&& draw_word) {
        if (bound.is_zero()) return BigUint();
        const std::size_t n = bound.limbs_.size();
        const std::uint64_t top = bound.limbs_.back();
        const std::uint64_t mask =
            top == ~std::uint64_t{0}
                ? ~std::uint64_t{0}
                : (std::uint64_t{1} << std::bit_width(top)) - 1;
        for (;;) {
            BigUint candidate;
            candidate.limbs_.resize(n);
            for (std::size_t i = 0; i + 1 < n; ++i) candidate.limbs_[i] = draw_word();
            candidate.limbs_[n - 1] = draw_word() & mask;
            candidate.trim();
            if (candidate < bound) return candidate;
        }
    }

private:
    void trim();
    std::vector<std::uint64_t> limbs_;
};

}  // namespace blr
