#include "selfaffine/params.hpp"

#include <cstdlib>
#include <sstream>

namespace selfaffine {

void require_valid(const AffinePair& pair) {
    if (std::llabs(pair.p) < 2)
        throw invalid_input("|p| must be at least 2");
    if (std::llabs(pair.q) < 2)
        throw invalid_input("|q| must be at least 2");
    if (pair.m < 1) throw invalid_input("m must be at least 1");
    if (pair.n < 1) throw invalid_input("n must be at least 1");
}

HypothesisReport validate(const AffinePair& pair) {
    require_valid(pair);
    HypothesisReport report;
    long long ap = std::llabs(pair.p), aq = std::llabs(pair.q);

    bool m_window = (ap + 1 < pair.m) && (pair.m < 2 * ap - 1);
    bool n_floor = 2 * pair.n >= aq + 1;
    report.band_hypotheses_ok = m_window && n_floor;
    if (!report.band_hypotheses_ok) {
        std::ostringstream msg;
        msg << "band hypotheses fail:";
        if (!m_window) msg << " need |p|+1 < m < 2|p|-1 (|p|=" << ap << ", m=" << pair.m << ")";
        if (!n_floor) msg << " need 2n >= |q|+1 (|q|=" << aq << ", n=" << pair.n << ")";
        report.messages.push_back(msg.str());
    }

    report.standard_digits_ok = (pair.m == ap) && (pair.n == aq);
    if (!report.standard_digits_ok) {
        std::ostringstream msg;
        msg << "digit counts are not (|p|, |q|) = (" << ap << ", " << aq << ")";
        report.messages.push_back(msg.str());
    }

    report.tile_dimensions_ok = pair.m * pair.n == ap * aq;
    if (!report.tile_dimensions_ok) {
        std::ostringstream msg;
        msg << "m*n = " << pair.m * pair.n << " differs from |p*q| = " << ap * aq;
        report.messages.push_back(msg.str());
    }
    return report;
}

AffinePair normalize_sign(const AffinePair& pair) {
    require_valid(pair);
    if (pair.p > 0) return pair;
    return {-pair.p, -pair.q, -pair.a, pair.m, pair.n};
}

Rat inverse_shear_coeff(long long p, long long q, long long k) {
    if (k < 0) throw invalid_input("inverse_shear_coeff: negative power");
    if (k == 0) return 0;
    if (p != q) {
        Rat pk = rat_pow(rat(1, p), k), qk = rat_pow(rat(1, q), k);
        return (pk - qk) / rat(q - p);
    }
    return Rat(k) / rat_pow(Rat(q), k + 1);
}

Rat shear_coeff(long long p, long long q, long long k) {
    if (k < 0) throw invalid_input("shear_coeff: negative power");
    if (k == 0) return 0;
    if (p != q) return (rat_pow(Rat(p), k) - rat_pow(Rat(q), k)) / rat(q - p);
    return Rat(-k) * rat_pow(Rat(q), k - 1);
}

std::vector<long long> digit_difference_range(long long count) {
    if (count < 1) throw invalid_input("digit_difference_range: count must be >= 1");
    std::vector<long long> out;
    out.reserve(static_cast<size_t>(2 * count - 1));
    for (long long d = -(count - 1); d <= count - 1; ++d) out.push_back(d);
    return out;
}

Rat geometric_tail_bound(long long base_abs, long long depth, const Rat& max_coeff) {
    if (base_abs < 2) throw invalid_input("geometric_tail_bound: base must have magnitude >= 2");
    if (depth < 0) throw invalid_input("geometric_tail_bound: negative depth");
    if (max_coeff < 0) throw invalid_input("geometric_tail_bound: negative coefficient bound");
    return max_coeff / (rat_pow(Rat(base_abs), depth) * Rat(base_abs - 1));
}

} // namespace selfaffine
