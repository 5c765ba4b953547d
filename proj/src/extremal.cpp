#include "selfaffine/extremal.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <vector>

namespace selfaffine::extremal {

namespace {

PeriodicSequence negated(const PeriodicSequence& seq) {
    PeriodicSequence out = seq;
    for (long long& c : out.head) c = -c;
    for (long long& c : out.cycle) c = -c;
    return out;
}

/* Exact optimizer for sum_t c_t q^{-t} over a sequence space, on the automaton
   whose states pair the scaled residual with the sign of the next weight.
   Policy iteration with exact rational policy evaluation terminates because a
   strictly improving step never revisits a policy; the final values are then
   certified against the Bellman optimality equation exactly. */
class GeometricOptimizer {
public:
    GeometricOptimizer(const SequenceSpace& space, long long q)
        : space_(space), limit_(space.residual_limit()), mu_(rat(1, std::llabs(q))),
          sign_(q < 0 ? -1 : 1) {
        if (std::llabs(q) < 2) throw invalid_input("geometric base must have magnitude >= 2");
        if (!space_.feasible()) throw invalid_input("optimizer over an empty sequence space");
        state_count_ = static_cast<size_t>(2 * limit_ + 1) * 2;
        policy_.assign(state_count_, 0);
        for (size_t u = 0; u < state_count_; ++u) {
            long long residual = residual_of(u);
            policy_[u] = std::clamp(space_.p * residual, -space_.max_coeff(), space_.max_coeff());
        }
        values_ = evaluate_policy();
        while (improve_policy()) values_ = evaluate_policy();
        certify();
    }

    Rat max_from(long long residual, int parity) const { return values_[index(residual, parity)]; }
    Rat min_from(long long residual, int parity) const {
        return -values_[index(-residual, parity)];
    }

    PeriodicSequence argmax_from(long long residual, int parity) const {
        return walk(index(residual, parity));
    }
    PeriodicSequence argmin_from(long long residual, int parity) const {
        return negated(walk(index(-residual, parity)));
    }

    int first_parity() const { return sign_; }

private:
    size_t index(long long residual, int parity) const {
        if (std::llabs(residual) > limit_)
            throw invalid_input("optimizer queried outside the residual range");
        return static_cast<size_t>(residual + limit_) * 2 + (parity < 0 ? 1 : 0);
    }
    long long residual_of(size_t u) const { return static_cast<long long>(u / 2) - limit_; }
    int parity_of(size_t u) const { return (u % 2 == 1) ? -1 : 1; }
    size_t successor(size_t u, long long coeff) const {
        return index(space_.step(residual_of(u), coeff), parity_of(u) * sign_);
    }
    Rat gain(size_t u, long long coeff) const { return Rat(parity_of(u) * coeff); }

    std::vector<Rat> evaluate_policy() const {
        std::vector<Rat> value(state_count_);
        std::vector<int> mark(state_count_, 0); // 0 new, 1 on path, 2 done
        for (size_t start = 0; start < state_count_; ++start) {
            if (mark[start] == 2) continue;
            std::vector<size_t> path;
            size_t cur = start;
            while (mark[cur] == 0) {
                mark[cur] = 1;
                path.push_back(cur);
                cur = successor(cur, policy_[cur]);
            }
            size_t resolved = path.size();
            if (mark[cur] == 1) {
                size_t pos = 0;
                while (path[pos] != cur) ++pos;
                // V(cur) = sum_i mu^{i+1} g_i + mu^{cycle length} V(cur) around the cycle
                Rat acc = 0, muk = 1;
                for (size_t i = pos; i < path.size(); ++i) {
                    muk *= mu_;
                    acc += muk * gain(path[i], policy_[path[i]]);
                }
                value[cur] = acc / (Rat(1) - muk);
                mark[cur] = 2;
                for (size_t i = path.size(); i-- > pos + 1;) {
                    size_t u = path[i];
                    value[u] = mu_ * (gain(u, policy_[u]) + value[successor(u, policy_[u])]);
                    mark[u] = 2;
                }
                resolved = pos;
            }
            for (size_t i = resolved; i-- > 0;) {
                size_t u = path[i];
                value[u] = mu_ * (gain(u, policy_[u]) + value[successor(u, policy_[u])]);
                mark[u] = 2;
            }
        }
        return value;
    }

    bool improve_policy() {
        bool improved = false;
        for (size_t u = 0; u < state_count_; ++u) {
            Rat best = values_[u];
            long long best_coeff = policy_[u];
            for (long long c : space_.coefficients_from(residual_of(u))) {
                Rat cand = mu_ * (gain(u, c) + values_[successor(u, c)]);
                if (cand > best) {
                    best = cand;
                    best_coeff = c;
                }
            }
            if (best_coeff != policy_[u] && best > values_[u]) {
                policy_[u] = best_coeff;
                improved = true;
            }
        }
        return improved;
    }

    void certify() const {
        for (size_t u = 0; u < state_count_; ++u) {
            Rat best;
            bool first = true;
            for (long long c : space_.coefficients_from(residual_of(u))) {
                Rat cand = mu_ * (gain(u, c) + values_[successor(u, c)]);
                if (first || cand > best) best = cand;
                first = false;
            }
            if (first || best != values_[u])
                throw std::logic_error("policy iteration left a non-optimal state");
        }
    }

    PeriodicSequence walk(size_t start) const {
        std::vector<long long> digits;
        std::vector<long long> seen_at(state_count_, -1);
        size_t cur = start;
        while (seen_at[cur] < 0) {
            seen_at[cur] = static_cast<long long>(digits.size());
            digits.push_back(policy_[cur]);
            cur = successor(cur, policy_[cur]);
        }
        size_t pos = static_cast<size_t>(seen_at[cur]);
        PeriodicSequence seq;
        seq.head.assign(digits.begin(), digits.begin() + static_cast<long long>(pos));
        seq.cycle.assign(digits.begin() + static_cast<long long>(pos), digits.end());
        return seq;
    }

    SequenceSpace space_;
    long long limit_;
    Rat mu_;
    int sign_;
    size_t state_count_ = 0;
    std::vector<long long> policy_;
    std::vector<Rat> values_;
};

} // namespace

ExtremeEnclosure enumerate_extremes(const SequenceSpace& space, const ValueFunctional& functional,
                                    long long depth) {
    space.check();
    functional.check();
    if (depth < 0) throw invalid_input("enumerate_extremes: negative depth");

    long long bound = space.max_coeff();
    ExtremeEnclosure out;
    out.depth = depth;

    if (!space.feasible()) {
        Rat whole = functional.tail_bound(0, bound);
        out.tail = whole;
        out.max_prefix = functional.offset;
        out.min_prefix = functional.offset;
        out.max_enclosure = RationalInterval(functional.offset - whole, functional.offset + whole);
        out.min_enclosure = out.max_enclosure;
        out.certified = false;
        return out;
    }

    long long limit = space.residual_limit();
    size_t width = static_cast<size_t>(2 * limit + 1);
    struct Cell {
        bool present = false;
        Rat maxv, minv;
    };
    std::vector<Cell> cur(width), next(width);
    cur[static_cast<size_t>(space.constraint() + limit)] = {true, 0, 0};

    for (long long t = 1; t <= depth; ++t) {
        Rat w = functional.coefficient_weight(t);
        for (auto& cell : next) cell.present = false;
        for (long long r = -limit; r <= limit; ++r) {
            const Cell& from = cur[static_cast<size_t>(r + limit)];
            if (!from.present) continue;
            for (long long c : space.coefficients_from(r)) {
                size_t to = static_cast<size_t>(space.step(r, c) + limit);
                Rat contrib = Rat(c) * w;
                Rat hi = from.maxv + contrib, lo = from.minv + contrib;
                if (!next[to].present) {
                    next[to] = {true, hi, lo};
                } else {
                    if (hi > next[to].maxv) next[to].maxv = hi;
                    if (lo < next[to].minv) next[to].minv = lo;
                }
            }
        }
        std::swap(cur, next);
    }

    bool any = false;
    Rat leaf_max, leaf_min;
    for (const Cell& cell : cur) {
        if (!cell.present) continue;
        if (!any || cell.maxv > leaf_max) leaf_max = cell.maxv;
        if (!any || cell.minv < leaf_min) leaf_min = cell.minv;
        any = true;
    }
    if (!any) throw std::logic_error("feasible space lost all states during enumeration");

    out.tail = functional.tail_bound(depth, bound);
    out.max_prefix = functional.offset + leaf_max;
    out.min_prefix = functional.offset + leaf_min;
    out.max_enclosure = RationalInterval(out.max_prefix - out.tail, out.max_prefix + out.tail);
    out.min_enclosure = RationalInterval(out.min_prefix - out.tail, out.min_prefix + out.tail);
    out.certified = true;
    return out;
}

ExactExtremes exact_geometric_extremes(const SequenceSpace& space, long long q) {
    space.check();
    if (!space.feasible()) throw invalid_input("exact extremes of an empty sequence space");
    GeometricOptimizer opt(space, q);
    long long r0 = space.constraint();
    int s0 = opt.first_parity();

    ExactExtremes out;
    out.max_value = opt.max_from(r0, s0);
    out.min_value = opt.min_from(r0, s0);
    out.argmax = opt.argmax_from(r0, s0);
    out.argmin = opt.argmin_from(r0, s0);

    ValueFunctional f = ValueFunctional::geometric(q);
    if (!out.argmax.in_space(space) || !out.argmin.in_space(space) ||
        f.evaluate(out.argmax) != out.max_value || f.evaluate(out.argmin) != out.min_value)
        throw std::logic_error("extremal witness failed exact validation");
    return out;
}

namespace {

void require_window(long long p, long long m) {
    if (!(p + 1 < m && m < 2 * p - 1))
        throw invalid_input("extremes formulas unproven for this m");
}

ClosedExtremes affine_map(const ClosedExtremes& raw, const Rat& scale, const Rat& offset) {
    Rat a = offset + scale * raw.max_value, b = offset + scale * raw.min_value;
    if (scale < 0) std::swap(a, b);
    return {a, b};
}

} // namespace

ClosedExtremes closed_extremes(const SequenceSpace& space, const ValueFunctional& functional) {
    space.check();
    functional.check();
    long long p = space.p;
    require_window(p, space.m);

    ClosedExtremes raw;
    switch (functional.kind) {
    case ValueFunctional::Kind::GeometricBaseQ: {
        long long q = functional.q;
        if (space.kind == SpaceKind::SumOne) {
            if (p == q) {
                raw = {Rat(1), Rat(1)};
            } else if (q > 0) {
                Rat straight = rat(p - 1, q - 1);
                Rat bent = rat(p * q + q - 2 * p, q * (q - 1));
                raw = p > q ? ClosedExtremes{straight, bent} : ClosedExtremes{bent, straight};
            } else {
                raw = {rat(p * q + 2 * p - q, q * (q + 1)), rat(p + 1, q + 1)};
            }
        } else {
            if (p == q) {
                raw = {Rat(0), Rat(0)};
            } else {
                long long aq = std::llabs(q);
                Rat top = rat(std::llabs(p - q), aq * (aq - 1));
                raw = {top, -top};
            }
        }
        break;
    }
    case ValueFunctional::Kind::WeightedBaseP: {
        if (functional.p != p)
            throw invalid_input("weighted closed forms need the functional base to match the space");
        if (space.kind == SpaceKind::SumOne)
            raw = {rat(p, p - 1), rat(p - 2, p - 1)};
        else
            raw = {rat(1, p - 1), rat(-1, p - 1)};
        break;
    }
    case ValueFunctional::Kind::ShearSeries:
        throw invalid_input("no closed form for shear functionals");
    }
    return affine_map(raw, functional.scale, functional.offset);
}

ExtremesReport extremes_report(long long p, long long q, long long m, long long depth) {
    if (p < 2) throw invalid_input("extremes report requires p >= 2 (normalize signs first)");
    if (std::llabs(q) < 2) throw invalid_input("extremes report requires |q| >= 2");
    SequenceSpace one{SpaceKind::SumOne, p, m};
    SequenceSpace zero{SpaceKind::SumZero, p, m};
    ValueFunctional geo = ValueFunctional::geometric(q);
    ValueFunctional wgt = ValueFunctional::weighted(p);

    ExtremesReport r{p, q, m, depth, {}, {}, {}, {}, {}, {}, {}, {}};
    r.geometric_sum_one = closed_extremes(one, geo);
    r.geometric_sum_zero = closed_extremes(zero, geo);
    r.weighted_sum_one = closed_extremes(one, wgt);
    r.weighted_sum_zero = closed_extremes(zero, wgt);
    r.geometric_sum_one_enclosure = enumerate_extremes(one, geo, depth);
    r.geometric_sum_zero_enclosure = enumerate_extremes(zero, geo, depth);
    r.weighted_sum_one_enclosure = enumerate_extremes(one, wgt, depth);
    r.weighted_sum_zero_enclosure = enumerate_extremes(zero, wgt, depth);
    return r;
}

std::string to_string(Attainability a) {
    switch (a) {
    case Attainability::Attainable: return "attainable";
    case Attainability::Unattainable: return "unattainable";
    case Attainability::Unknown: return "unknown";
    }
    return "unknown";
}

bool check_witness(const SequenceSpace& space, const ValueFunctional& functional,
                   const RationalInterval& target, const PeriodicSequence& witness) {
    return witness.in_space(space) && target.contains(functional.evaluate(witness));
}

namespace {

struct Reduction {
    bool geometric = true; // else weighted
    long long base = 2;    // q for geometric, p for weighted
    Rat scale = 1;         // original value = offset + scale * primitive value
    Rat offset = 0;
};

Reduction reduce_on_space(const SequenceSpace& space, const ValueFunctional& f) {
    Reduction red;
    switch (f.kind) {
    case ValueFunctional::Kind::GeometricBaseQ:
        red = {true, f.q, f.scale, f.offset};
        break;
    case ValueFunctional::Kind::WeightedBaseP:
        red = {false, f.p, f.scale, f.offset};
        break;
    case ValueFunctional::Kind::ShearSeries: {
        if (f.p != space.p)
            throw invalid_input("shear reduction needs the functional base to match the space");
        Rat sigma(space.constraint());
        if (f.p != f.q) {
            // sum_k c_k w_k = (sigma/p - G/q) / (q - p) with G the geometric value
            Rat qp = Rat(f.q) - Rat(f.p);
            red.geometric = true;
            red.base = f.q;
            red.offset = f.offset + f.scale * sigma / (Rat(f.p) * qp);
            red.scale = -f.scale / (Rat(f.q) * qp);
        } else {
            // sum_k c_k w_k = (W + sigma) / p^2 with W the weighted value
            Rat pp = Rat(f.p) * Rat(f.p);
            red.geometric = false;
            red.base = f.p;
            red.offset = f.offset + f.scale * sigma / pp;
            red.scale = f.scale / pp;
        }
        break;
    }
    }
    return red;
}

std::vector<PeriodicSequence> witness_candidates(const SequenceSpace& space) {
    std::vector<PeriodicSequence> out;
    long long p = space.p;
    std::vector<PeriodicSequence> sum_one = {
        {{}, {p - 1}},
        {{p + 1}, {-(p - 1)}},
        {{}, {p + 1, -(p + 1)}},
        {{p - 1}, {p + 1, -(p + 1)}},
    };
    if (space.kind == SpaceKind::SumOne) {
        out = sum_one;
    } else {
        out.push_back({{}, {}});
        for (const PeriodicSequence& w : sum_one) {
            PeriodicSequence plus{{-1}, w.cycle}, minus;
            plus.head.insert(plus.head.end(), w.head.begin(), w.head.end());
            minus = negated(plus);
            out.push_back(std::move(plus));
            out.push_back(std::move(minus));
        }
    }
    std::erase_if(out, [&](const PeriodicSequence& w) { return !w.in_space(space); });
    return out;
}

struct SearchBudget {
    long long remaining;
    bool exhausted = false;
    bool spend() {
        if (remaining <= 0) {
            exhausted = true;
            return false;
        }
        --remaining;
        return true;
    }
};

// Depth-first refinement for geometric primitives: every node carries an exact
// attained hull for its completions, so each visit either finds an exact
// witness endpoint, prunes, or splits.
struct GeometricSearch {
    const SequenceSpace& space;
    const GeometricOptimizer& opt;
    long long q;
    RationalInterval target;
    long long max_depth;
    SearchBudget& budget;

    Rat mu;
    int sign;
    std::vector<long long> prefix;
    std::optional<PeriodicSequence> found;
    bool unresolved = false;

    GeometricSearch(const SequenceSpace& s, const GeometricOptimizer& o, long long qq,
                    RationalInterval t, long long d, SearchBudget& b)
        : space(s), opt(o), q(qq), target(std::move(t)), max_depth(d), budget(b),
          mu(rat(1, std::llabs(qq))), sign(qq < 0 ? -1 : 1) {}

    int parity_at(long long k) const { // sign of weight q^{-(k+1)}
        return (sign < 0 && (k + 1) % 2 == 1) ? -1 : 1;
    }

    bool visit(long long k, long long residual, const Rat& value, const Rat& mu_k) {
        if (!budget.spend()) return false;
        int parity = parity_at(k);
        Rat hi = value + mu_k * opt.max_from(residual, parity);
        Rat lo = value + mu_k * opt.min_from(residual, parity);
        if (target.contains(hi)) {
            PeriodicSequence tail = opt.argmax_from(residual, parity);
            found = assemble(tail);
            return true;
        }
        if (target.contains(lo)) {
            PeriodicSequence tail = opt.argmin_from(residual, parity);
            found = assemble(tail);
            return true;
        }
        if (hi < target.lo || lo > target.hi) return false; // hull misses the target
        if (k == max_depth) {
            unresolved = true;
            return false;
        }
        Rat mu_next = mu_k * mu;
        Rat w = rat_pow(rat(1, q), k + 1);
        for (long long c : space.coefficients_from(residual)) {
            prefix.push_back(c);
            bool hit = visit(k + 1, space.step(residual, c), value + Rat(c) * w, mu_next);
            prefix.pop_back();
            if (hit) return true;
            if (budget.exhausted) return false;
        }
        return false;
    }

    PeriodicSequence assemble(const PeriodicSequence& tail) const {
        PeriodicSequence seq;
        seq.head = prefix;
        seq.head.insert(seq.head.end(), tail.head.begin(), tail.head.end());
        seq.cycle = tail.cycle;
        return seq;
    }
};

// Depth-first refinement for weighted primitives: hulls come from tail bounds
// (sound, not attained), and each node also tries the exact value of the
// canonical completion.
struct WeightedSearch {
    const SequenceSpace& space;
    long long base;
    RationalInterval target;
    long long max_depth;
    SearchBudget& budget;

    ValueFunctional prim;
    std::vector<Rat> tails;   // tail bound after k coefficients
    std::vector<Rat> weights; // w_k, 1-based at index k
    std::vector<long long> prefix;
    std::optional<PeriodicSequence> found;
    bool unresolved = false;

    WeightedSearch(const SequenceSpace& s, long long b, RationalInterval t, long long d,
                   SearchBudget& bud)
        : space(s), base(b), target(std::move(t)), max_depth(d), budget(bud),
          prim(ValueFunctional::weighted(b)) {
        tails.reserve(static_cast<size_t>(max_depth + 1));
        weights.assign(1, Rat(0));
        for (long long k = 0; k <= max_depth; ++k) {
            tails.push_back(prim.tail_bound(k, space.max_coeff()));
            if (k + 1 <= max_depth) weights.push_back(prim.coefficient_weight(k + 1));
        }
    }

    bool visit(long long k, long long residual, const Rat& value) {
        if (!budget.spend()) return false;
        // exact candidate: retire the residual now, zeros afterwards
        PeriodicSequence candidate = space.canonical_completion(residual);
        candidate.head.insert(candidate.head.begin(), prefix.begin(), prefix.end());
        if (target.contains(prim.evaluate(candidate))) {
            found = candidate;
            return true;
        }
        const Rat& pad = tails[static_cast<size_t>(k)];
        if (value + pad < target.lo || value - pad > target.hi) return false;
        if (k == max_depth) {
            unresolved = true;
            return false;
        }
        for (long long c : space.coefficients_from(residual)) {
            prefix.push_back(c);
            bool hit = visit(k + 1, space.step(residual, c),
                             value + Rat(c) * weights[static_cast<size_t>(k + 1)]);
            prefix.pop_back();
            if (hit) return true;
            if (budget.exhausted) return false;
        }
        return false;
    }
};

} // namespace

AttainabilityResult attainable(const SequenceSpace& space, const ValueFunctional& functional,
                               const RationalInterval& target, long long depth,
                               long long node_budget) {
    space.check();
    functional.check();
    if (depth < 0) throw invalid_input("attainable: negative depth");

    AttainabilityResult result;
    result.depth_used = depth;

    if (!space.feasible()) {
        result.status = Attainability::Unattainable;
        result.note = "the sequence space is empty";
        return result;
    }

    Reduction red = reduce_on_space(space, functional);

    auto finish_attainable = [&](PeriodicSequence witness) {
        Rat value = functional.evaluate(witness);
        if (!check_witness(space, functional, target, witness))
            throw std::logic_error("attainability produced an invalid witness");
        result.status = Attainability::Attainable;
        result.witness = std::move(witness);
        result.witness_value = value;
    };

    if (red.scale == 0) {
        PeriodicSequence canonical = space.canonical_completion(space.constraint());
        if (target.contains(red.offset)) {
            finish_attainable(std::move(canonical));
        } else {
            result.status = Attainability::Unattainable;
            result.note = "the functional is constant on the space";
        }
        return result;
    }

    RationalInterval prim_target = target.affine_preimage(red.scale, red.offset);
    SearchBudget budget{node_budget};

    if (red.geometric) {
        GeometricOptimizer opt(space, red.base);
        // cheap exact candidate before any search
        PeriodicSequence canonical = space.canonical_completion(space.constraint());
        if (prim_target.contains(canonical.power_sum(rat(1, red.base)))) {
            finish_attainable(std::move(canonical));
            return result;
        }
        GeometricSearch search(space, opt, red.base, prim_target, depth, budget);
        bool hit = search.visit(0, space.constraint(), Rat(0), Rat(1));
        if (hit) {
            finish_attainable(std::move(*search.found));
        } else if (budget.exhausted) {
            result.status = Attainability::Unknown;
            result.note = "node budget exhausted";
        } else if (search.unresolved) {
            result.status = Attainability::Unknown;
            result.note = "needs refinement beyond the depth limit";
        } else {
            result.status = Attainability::Unattainable;
        }
        return result;
    }

    for (const PeriodicSequence& candidate : witness_candidates(space)) {
        if (prim_target.contains(candidate.weighted_power_sum(rat(1, red.base)))) {
            finish_attainable(candidate);
            return result;
        }
    }
    WeightedSearch search(space, red.base, prim_target, depth, budget);
    bool hit = search.visit(0, space.constraint(), Rat(0));
    if (hit) {
        finish_attainable(std::move(*search.found));
    } else if (budget.exhausted) {
        result.status = Attainability::Unknown;
        result.note = "node budget exhausted";
    } else if (search.unresolved) {
        result.status = Attainability::Unknown;
        result.note = "needs refinement beyond the depth limit";
    } else {
        result.status = Attainability::Unattainable;
    }
    return result;
}

} // namespace selfaffine::extremal
