#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growth/rng.hpp"

namespace growth::randkit {

// Minimal unsigned big integer: just what exact partition counting and
// uniform descent sampling need (add, subtract, compare, small multiply,
// uniform draw below a bound, decimal printing).
class BigUint {
public:
    BigUint() = default;
    explicit BigUint(std::uint64_t v);

    bool is_zero() const { return limbs_.empty(); }
    int compare(const BigUint& other) const; // -1, 0, +1
    void add(const BigUint& other);
    void sub(const BigUint& other); // requires *this >= other
    void mul_small(std::uint32_t m);
    // *this = a * m, reusing existing capacity.
    void assign_mul(const BigUint& a, std::uint32_t m);

    // Convert to double (saturating); used only for diagnostics.
    double to_double() const;
    std::string to_string() const;

    // Uniform integer in [0, bound), bound > 0, by limb-wise rejection.
    static BigUint random_below(const BigUint& bound, Rng& rng);

private:
    void trim();
    std::vector<std::uint32_t> limbs_; // little-endian base 2^32, no leading zeros
};

} // namespace growth::randkit
