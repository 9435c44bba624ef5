#include "blr/big_uint.hpp"

#include <cmath>

#include "blr/errors.hpp"

namespace blr {

using u128 = unsigned __int128;

BigUint::BigUint(std::uint64_t v) {
    if (v != 0) limbs_.push_back(v);
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::pow(std::uint64_t base, std::uint64_t exp) {
    BigUint out{1};
    for (std::uint64_t i = 0; i < exp; ++i) out.mul_u64(base);
    return out;
}

std::uint64_t BigUint::to_u64() const {
    if (limbs_.size() > 1)
        throw LimitsExceededError("BigUint value does not fit in 64 bits");
    return limbs_.empty() ? 0 : limbs_[0];
}

double BigUint::to_double() const {
    double out = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;)
        out = out * 18446744073709551616.0 + static_cast<double>(limbs_[i]);
    return out;
}

std::string BigUint::to_decimal_string() const {
    if (is_zero()) return "0";
    BigUint tmp = *this;
    std::string digits;
    while (!tmp.is_zero()) {
        std::uint64_t rem = tmp.divmod_u64(10);
        digits.push_back(static_cast<char>('0' + rem));
    }
    return {digits.rbegin(), digits.rend()};
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
    if (limbs_.size() < rhs.limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u128 sum = static_cast<u128>(limbs_[i]) + carry;
        if (i < rhs.limbs_.size()) sum += rhs.limbs_[i];
        limbs_[i] = static_cast<std::uint64_t>(sum);
        carry = static_cast<std::uint64_t>(sum >> 64);
    }
    if (carry != 0) limbs_.push_back(carry);
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
    if (*this < rhs) throw InvalidParameterError("BigUint subtraction underflow");
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u128 sub = static_cast<u128>(borrow);
        if (i < rhs.limbs_.size()) sub += rhs.limbs_[i];
        if (static_cast<u128>(limbs_[i]) >= sub) {
            limbs_[i] -= static_cast<std::uint64_t>(sub);
            borrow = 0;
        } else {
            limbs_[i] = static_cast<std::uint64_t>((static_cast<u128>(1) << 64) +
                                                   limbs_[i] - sub);
            borrow = 1;
        }
    }
    trim();
    return *this;
}

BigUint& BigUint::mul_u64(std::uint64_t m) {
    if (m == 0 || is_zero()) {
        limbs_.clear();
        return *this;
    }
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
        u128 prod = static_cast<u128>(limb) * m + carry;
        limb = static_cast<std::uint64_t>(prod);
        carry = static_cast<std::uint64_t>(prod >> 64);
    }
    if (carry != 0) limbs_.push_back(carry);
    return *this;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
    BigUint out;
    if (a.is_zero() || b.is_zero()) return out;
    out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            u128 cur = static_cast<u128>(a.limbs_[i]) * b.limbs_[j] +
                       out.limbs_[i + j] + carry;
            out.limbs_[i + j] = static_cast<std::uint64_t>(cur);
            carry = static_cast<std::uint64_t>(cur >> 64);
        }
        std::size_t pos = i + b.limbs_.size();
        while (carry != 0) {
            u128 cur = static_cast<u128>(out.limbs_[pos]) + carry;
            out.limbs_[pos] = static_cast<std::uint64_t>(cur);
            carry = static_cast<std::uint64_t>(cur >> 64);
            ++pos;
        }
    }
    out.trim();
    return out;
}

std::uint64_t BigUint::divmod_u64(std::uint64_t m) {
    if (m == 0) throw InvalidParameterError("BigUint division by zero");
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        u128 cur = (static_cast<u128>(rem) << 64) | limbs_[i];
        limbs_[i] = static_cast<std::uint64_t>(cur / m);
        rem = static_cast<std::uint64_t>(cur % m);
    }
    trim();
    return rem;
}

std::strong_ordering BigUint::operator<=>(const BigUint& rhs) const {
    if (limbs_.size() != rhs.limbs_.size())
        return limbs_.size() <=> rhs.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] <=> rhs.limbs_[i];
    }
    return std::strong_ordering::equal;
}

}  // namespace blr
