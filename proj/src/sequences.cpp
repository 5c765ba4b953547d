#include "selfaffine/sequences.hpp"

#include <algorithm>
#include <sstream>

namespace selfaffine::extremal {

void SequenceSpace::check() const {
    if (p < 2) throw invalid_input("sequence space base must be >= 2");
    if (m < 1) throw invalid_input("sequence space digit count must be >= 1");
}

std::vector<long long> SequenceSpace::coefficients_from(long long residual) const {
    std::vector<long long> out;
    if (!state_feasible(residual)) return out;
    long long limit = residual_limit(), bound = max_coeff();
    long long lo = std::max(p * residual - limit, -bound);
    long long hi = std::min(p * residual + limit, bound);
    for (long long c = lo; c <= hi; ++c) out.push_back(c);
    return out;
}

PeriodicSequence SequenceSpace::canonical_completion(long long residual) const {
    if (!state_feasible(residual))
        throw invalid_input("canonical_completion from a non-completable residual");
    PeriodicSequence out;
    long long bound = max_coeff();
    while (residual != 0) {
        long long c = std::clamp(p * residual, -bound, bound);
        long long next = step(residual, c);
        if (next == residual) {
            out.cycle.push_back(c);
            return out;
        }
        out.head.push_back(c);
        residual = next;
    }
    return out;
}

long long PeriodicSequence::at(long long k) const {
    if (k < 1) throw invalid_input("sequence index is 1-based");
    long long idx = k - 1;
    if (idx < static_cast<long long>(head.size())) return head[static_cast<size_t>(idx)];
    if (cycle.empty()) return 0;
    return cycle[static_cast<size_t>((idx - head.size()) % cycle.size())];
}

bool PeriodicSequence::all_zero() const {
    auto zero = [](long long c) { return c == 0; };
    return std::all_of(head.begin(), head.end(), zero) &&
           std::all_of(cycle.begin(), cycle.end(), zero);
}

Rat PeriodicSequence::power_sum(const Rat& x) const {
    if (rat_abs(x) >= 1) throw invalid_input("power_sum requires |x| < 1");
    Rat sum = 0, xk = 1;
    for (long long c : head) {
        xk *= x;
        sum += Rat(c) * xk;
    }
    if (cycle.empty()) return sum;
    Rat block = 0, xi = 1;
    for (long long c : cycle) {
        xi *= x;
        block += Rat(c) * xi;
    }
    Rat x_cycle = xi; // x^{cycle length}
    return sum + xk * block / (Rat(1) - x_cycle);
}

Rat PeriodicSequence::weighted_power_sum(const Rat& x) const {
    if (rat_abs(x) >= 1) throw invalid_input("weighted_power_sum requires |x| < 1");
    Rat sum = 0, xk = 1;
    long long h = static_cast<long long>(head.size());
    for (long long k = 1; k <= h; ++k) {
        xk *= x;
        sum += Rat(head[static_cast<size_t>(k - 1)]) * Rat(k) * xk;
    }
    if (cycle.empty()) return sum;
    // positions h + j*rho + i for i = 1..rho, j >= 0; with y = x^rho:
    //   sum_j (h + i + j*rho) y^j = (h+i)/(1-y) + rho*y/(1-y)^2
    long long rho = static_cast<long long>(cycle.size());
    Rat block_plain = 0, block_indexed = 0, xi = 1;
    for (long long i = 1; i <= rho; ++i) {
        xi *= x;
        Rat term = Rat(cycle[static_cast<size_t>(i - 1)]) * xi;
        block_plain += term;
        block_indexed += term * Rat(h + i);
    }
    Rat y = xi; // x^rho
    Rat one_minus = Rat(1) - y;
    return sum + xk * (block_indexed / one_minus + Rat(rho) * y * block_plain / (one_minus * one_minus));
}

bool PeriodicSequence::in_space(const SequenceSpace& space) const {
    space.check();
    long long bound = space.max_coeff();
    for (long long c : head)
        if (std::abs(c) > bound) return false;
    for (long long c : cycle)
        if (std::abs(c) > bound) return false;
    return power_sum(rat(1, space.p)) == Rat(space.constraint());
}

std::string PeriodicSequence::render(long long count) const {
    std::ostringstream out;
    for (long long k = 1; k <= count; ++k) {
        if (k > 1) out << ',';
        out << at(k);
    }
    if (!cycle.empty() || static_cast<long long>(head.size()) > count) out << ",...";
    return out.str();
}

ValueFunctional ValueFunctional::geometric(long long q, Rat scale, Rat offset) {
    ValueFunctional f;
    f.kind = Kind::GeometricBaseQ;
    f.q = q;
    f.p = 2;
    f.scale = std::move(scale);
    f.offset = std::move(offset);
    f.check();
    return f;
}

ValueFunctional ValueFunctional::weighted(long long p, Rat scale, Rat offset) {
    ValueFunctional f;
    f.kind = Kind::WeightedBaseP;
    f.p = p;
    f.q = 2;
    f.scale = std::move(scale);
    f.offset = std::move(offset);
    f.check();
    return f;
}

ValueFunctional ValueFunctional::shear_series(long long p, long long q, Rat scale, Rat offset) {
    ValueFunctional f;
    f.kind = Kind::ShearSeries;
    f.p = p;
    f.q = q;
    f.scale = std::move(scale);
    f.offset = std::move(offset);
    f.check();
    return f;
}

void ValueFunctional::check() const {
    if (kind != Kind::GeometricBaseQ && p < 2)
        throw invalid_input("functional base p must be >= 2");
    if (kind != Kind::WeightedBaseP && std::abs(q) < 2)
        throw invalid_input("functional base q must have magnitude >= 2");
}

Rat ValueFunctional::coefficient_weight(long long k) const {
    if (k < 1) throw invalid_input("coefficient index is 1-based");
    switch (kind) {
    case Kind::GeometricBaseQ: return scale * rat_pow(rat(1, q), k);
    case Kind::WeightedBaseP: return scale * Rat(k) * rat_pow(rat(1, p), k);
    case Kind::ShearSeries: return scale * inverse_shear_coeff(p, q, k + 1);
    }
    throw invalid_input("unreachable functional kind");
}

namespace {

// sum_{k > depth} k x^k = x^{depth+1} * ((depth+1) - depth*x) / (1-x)^2 for 0 < x < 1
Rat weighted_tail(const Rat& x, long long depth) {
    Rat one_minus = Rat(1) - x;
    return rat_pow(x, depth + 1) * (Rat(depth + 1) - Rat(depth) * x) / (one_minus * one_minus);
}

} // namespace

Rat ValueFunctional::tail_bound(long long depth, long long max_coeff) const {
    if (depth < 0) throw invalid_input("tail_bound: negative depth");
    if (max_coeff < 0) throw invalid_input("tail_bound: negative coefficient bound");
    Rat mag = rat_abs(scale) * Rat(max_coeff);
    switch (kind) {
    case Kind::GeometricBaseQ:
        return mag * geometric_tail_bound(std::abs(q), depth, Rat(1));
    case Kind::WeightedBaseP:
        return mag * weighted_tail(rat(1, p), depth);
    case Kind::ShearSeries: {
        if (p != q) {
            // |w_k| <= (p^{-(k+1)} + |q|^{-(k+1)}) / |q - p|
            Rat part_p = geometric_tail_bound(p, depth + 1, Rat(1));
            Rat part_q = geometric_tail_bound(std::abs(q), depth + 1, Rat(1));
            return mag * (part_p + part_q) / Rat(std::abs(q - p));
        }
        // w_k = (k+1) q^{-(k+2)}: shift the arithmetic-geometric tail
        Rat x = rat(1, p);
        return mag * x * weighted_tail(x, depth + 1);
    }
    }
    throw invalid_input("unreachable functional kind");
}

Rat ValueFunctional::evaluate(const PeriodicSequence& seq) const {
    switch (kind) {
    case Kind::GeometricBaseQ:
        return offset + scale * seq.power_sum(rat(1, q));
    case Kind::WeightedBaseP:
        return offset + scale * seq.weighted_power_sum(rat(1, p));
    case Kind::ShearSeries: {
        if (p != q) {
            Rat sp = seq.power_sum(rat(1, p));
            Rat sq = seq.power_sum(rat(1, q));
            Rat shear_sum = (sp / Rat(p) - sq / Rat(q)) / Rat(q - p);
            return offset + scale * shear_sum;
        }
        Rat x = rat(1, p);
        Rat shear_sum = (seq.weighted_power_sum(x) + seq.power_sum(x)) / Rat(p * p);
        return offset + scale * shear_sum;
    }
    }
    throw invalid_input("unreachable functional kind");
}

} // namespace selfaffine::extremal
