#include "selfaffine/rational.hpp"

#include <cctype>
#include <sstream>

namespace selfaffine {

Int int_pow(Int base, long long exp) {
    if (exp < 0) throw invalid_input("int_pow with negative exponent");
    Int result(1);
    while (exp > 0) {
        if (exp & 1) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

Rat rat_pow(const Rat& base, long long exp) {
    if (exp < 0) {
        if (base == 0) throw invalid_input("rat_pow: zero base with negative exponent");
        return rat_pow(Rat(1) / base, -exp);
    }
    Rat result(1), b = base;
    while (exp > 0) {
        if (exp & 1) result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

int rat_sign(const Rat& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

Int rat_floor(const Rat& x) {
    Int num = numerator(x), den = denominator(x);
    Int q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

Int rat_ceil(const Rat& x) { return -rat_floor(-x); }

bool is_integer(const Rat& x) { return denominator(x) == 1; }

RationalInterval::RationalInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw invalid_input("interval endpoints out of order");
}

RationalInterval RationalInterval::affine_image(const Rat& scale, const Rat& offset) const {
    Rat a = offset + scale * lo, b = offset + scale * hi;
    return scale < 0 ? RationalInterval(b, a) : RationalInterval(a, b);
}

RationalInterval RationalInterval::affine_preimage(const Rat& scale, const Rat& offset) const {
    if (scale == 0) throw invalid_input("affine_preimage with zero scale");
    Rat a = (lo - offset) / scale, b = (hi - offset) / scale;
    return scale < 0 ? RationalInterval(b, a) : RationalInterval(a, b);
}

Rat interval_gap(const RationalInterval& a, const RationalInterval& b) {
    if (a.hi < b.lo) return b.lo - a.hi;
    if (b.hi < a.lo) return a.lo - b.hi;
    return Rat(0);
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rat parse_rational(const std::string& text) {
    std::string s = text;
    // trim surrounding whitespace
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) throw invalid_input("empty rational literal");
    s = s.substr(b, e - b + 1);

    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = (s[0] == '-');
        s = s.substr(1);
    }
    if (s.empty()) throw invalid_input("malformed rational literal: '" + text + "'");

    auto fail = [&text]() -> Rat {
        throw invalid_input("malformed rational literal: '" + text + "'");
    };

    size_t slash = s.find('/');
    size_t dot = s.find('.');
    Rat value;
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return fail();
        Int d(den);
        if (d == 0) throw invalid_input("rational with zero denominator: '" + text + "'");
        value = Rat(Int(num), d);
    } else if (dot != std::string::npos) {
        std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || !all_digits(frac)) return fail();
        Int scale = int_pow(Int(10), static_cast<long long>(frac.size()));
        Int num = Int(whole) * scale + (frac.empty() ? Int(0) : Int(frac));
        value = Rat(num, scale);
    } else {
        if (!all_digits(s)) return fail();
        value = Rat(Int(s));
    }
    return negative ? Rat(-value) : value;
}

std::string format_rational(const Rat& x) {
    std::ostringstream out;
    out << numerator(x);
    if (denominator(x) != 1) out << '/' << denominator(x);
    return out.str();
}

} // namespace selfaffine
