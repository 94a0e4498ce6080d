#include "growth/bigint.hpp"

#include <algorithm>
#include <cmath>

#include "growth/errors.hpp"

namespace growth::randkit {

BigUint::BigUint(std::uint64_t v) {
    while (v != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(v));
        v >>= 32;
    }
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

int BigUint::compare(const BigUint& other) const {
    if (limbs_.size() != other.limbs_.size())
        return limbs_.size() < other.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
    }
    return 0;
}

void BigUint::add(const BigUint& other) {
    const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
    limbs_.resize(n, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = carry + limbs_[i];
        if (i < other.limbs_.size()) s += other.limbs_[i];
        limbs_[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
}

void BigUint::sub(const BigUint& other) {
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(limbs_[i]) - borrow -
                         (i < other.limbs_.size() ? other.limbs_[i] : 0);
        if (d < 0) {
            d += (std::int64_t{1} << 32);
            borrow = 1;
        } else {
            borrow = 0;
        }
        limbs_[i] = static_cast<std::uint32_t>(d);
    }
    if (borrow) throw domain_error("BigUint::sub underflow");
    trim();
}

void BigUint::mul_small(std::uint32_t m) {
    if (m == 0 || is_zero()) {
        limbs_.clear();
        return;
    }
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
        const std::uint64_t p = static_cast<std::uint64_t>(limb) * m + carry;
        limb = static_cast<std::uint32_t>(p);
        carry = p >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
}

void BigUint::assign_mul(const BigUint& a, std::uint32_t m) {
    limbs_.assign(a.limbs_.begin(), a.limbs_.end());
    mul_small(m);
}

double BigUint::to_double() const {
    double v = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
    return v;
}

std::string BigUint::to_string() const {
    if (is_zero()) return "0";
    std::vector<std::uint32_t> work(limbs_);
    std::string out;
    while (!work.empty()) {
        // Divide by 1e9, collecting the remainder as the next digit block.
        std::uint64_t rem = 0;
        for (std::size_t i = work.size(); i-- > 0;) {
            const std::uint64_t cur = (rem << 32) | work[i];
            work[i] = static_cast<std::uint32_t>(cur / 1000000000ull);
            rem = cur % 1000000000ull;
        }
        while (!work.empty() && work.back() == 0) work.pop_back();
        std::string block = std::to_string(rem);
        if (!work.empty()) block.insert(0, 9 - block.size(), '0');
        out.insert(0, block);
    }
    return out;
}

BigUint BigUint::random_below(const BigUint& bound, Rng& rng) {
    if (bound.is_zero()) throw parameter_error("random_below: bound must be positive");
    const std::uint32_t top = bound.limbs_.back();
    std::uint32_t mask = 1;
    while (mask < top) mask = (mask << 1) | 1u;
    BigUint out;
    out.limbs_.resize(bound.limbs_.size());
    for (;;) {
        for (std::size_t i = 0; i + 1 < out.limbs_.size(); ++i)
            out.limbs_[i] = static_cast<std::uint32_t>(rng.next());
        out.limbs_.back() = static_cast<std::uint32_t>(rng.next()) & mask;
        BigUint candidate = out;
        candidate.trim();
        if (candidate.compare(bound) < 0) return candidate;
    }
}

} // namespace growth::randkit
