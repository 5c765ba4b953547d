#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace selfaffine {

// All decision paths run on exact rationals; nothing in the library rounds.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Arguments outside an operation's documented domain.  The CLI maps this to exit code 2.
struct invalid_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration would exceed its configured budget.  The CLI maps this to exit code 3.
struct budget_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat rat(long long num, long long den = 1) {
    if (den == 0) throw invalid_input("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    return Rat(Int(num), Int(den));
}

Int int_pow(Int base, long long exp);      // exp >= 0
Rat rat_pow(const Rat& base, long long exp); // negative exp inverts; base != 0 then

Rat rat_abs(const Rat& x);
int rat_sign(const Rat& x);
Int rat_floor(const Rat& x);
Int rat_ceil(const Rat& x);
bool is_integer(const Rat& x);

/* Closed interval with exact rational endpoints.  Intervals are never empty;
   constructing one with lo > hi is a programming error and throws. */
struct RationalInterval {
    Rat lo, hi;

    RationalInterval() = default;
    RationalInterval(Rat l, Rat h);

    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    bool contains(const RationalInterval& other) const {
        return lo <= other.lo && other.hi <= hi;
    }
    bool intersects(const RationalInterval& other) const {
        return lo <= other.hi && other.lo <= hi;
    }
    Rat width() const { return hi - lo; }
    Rat midpoint() const { return (lo + hi) / 2; }

    // Image under x -> offset + scale*x (endpoints swap when scale < 0).
    RationalInterval affine_image(const Rat& scale, const Rat& offset) const;
    // Preimage under the same map; scale must be nonzero.
    RationalInterval affine_preimage(const Rat& scale, const Rat& offset) const;

    RationalInterval operator+(const RationalInterval& other) const {
        return {lo + other.lo, hi + other.hi};
    }
    bool operator==(const RationalInterval& other) const = default;
};

// Max-norm distance between two boxes given per-axis interval gaps.
Rat interval_gap(const RationalInterval& a, const RationalInterval& b);

/* Exact parsing of "7", "-3/4", "0.25".  Decimal literals denote exactly the
   printed value; anything else (exponents, stray characters) is rejected. */
Rat parse_rational(const std::string& text);

// Canonical form: "n" when the denominator is 1, else "n/d" with d > 0.
std::string format_rational(const Rat& x);

} // namespace selfaffine
