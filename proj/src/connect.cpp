#include "selfaffine/connect.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "selfaffine/disjoint_sets.hpp"

namespace selfaffine::connectivity {

using extremal::Attainability;
using extremal::SequenceSpace;
using extremal::SpaceKind;
using extremal::ValueFunctional;

namespace {

long long abs_ll(long long v) { return v < 0 ? -v : v; }

long long nearest_integer(const Rat& x) {
    return static_cast<long long>(rat_floor(x + rat(1, 2)));
}

void require_normalized(const AffinePair& pair, const char* who) {
    require_valid(pair);
    if (pair.p < 0) {
        throw invalid_input(std::string(who) + " expects a normalized pair (p >= 2); apply normalize_sign first");
    }
}

std::string band_text(const Rat& lo, const Rat& abs_a, const Rat& hi) {
    return format_rational(lo) + " <= |a| = " + format_rational(abs_a) + " <= " + format_rational(hi);
}

}  // namespace

std::string to_string(ConnectStatus status) {
    switch (status) {
        case ConnectStatus::Connected: return "Connected";
        case ConnectStatus::Disconnected: return "Disconnected";
        case ConnectStatus::OutOfScope: return "OutOfScope";
    }
    return "?";
}

std::string to_string(CriterionBranch branch) {
    switch (branch) {
        case CriterionBranch::QAbs2: return "QAbs2";
        case CriterionBranch::MainBandOuter: return "MainBandOuter";
        case CriterionBranch::MainBandInner: return "MainBandInner";
        case CriterionBranch::StandardDigits: return "StandardDigits";
        case CriterionBranch::None: return "None";
    }
    return "?";
}

std::string to_string(IntersectionCase which) {
    switch (which) {
        case IntersectionCase::SameColumn: return "same_column";
        case IntersectionCase::NextColumnSameRow: return "next_column_same_row";
        case IntersectionCase::NextColumnNextRow: return "next_column_next_row";
        case IntersectionCase::NextColumnPrevRow: return "next_column_prev_row";
        case IntersectionCase::ColumnCrossing: return "column_crossing";
    }
    return "?";
}

std::string to_string(OracleStatus status) {
    switch (status) {
        case OracleStatus::Connected: return "Connected";
        case OracleStatus::Disconnected: return "Disconnected";
        case OracleStatus::Unknown: return "Unknown";
    }
    return "?";
}

std::string to_string(LinkKind kind) {
    switch (kind) {
        case LinkKind::Vertical: return "vertical";
        case LinkKind::ColumnCrossing: return "column-crossing";
        case LinkKind::Horizontal: return "horizontal";
        case LinkKind::Diagonal: return "diagonal";
    }
    return "?";
}

ConnectVerdict decide(const AffinePair& pair) {
    require_normalized(pair, "decide");
    ConnectVerdict verdict;
    verdict.hypotheses = validate(pair);
    const long long qa = abs_ll(pair.q);
    const Rat abs_a = rat_abs(pair.a);

    if (verdict.hypotheses.band_hypotheses_ok) {
        if (qa == 2) {
            verdict.status = ConnectStatus::Connected;
            verdict.branch = CriterionBranch::QAbs2;
            verdict.satisfied_inequality = "|q| = 2, every a admissible";
            return verdict;
        }
        const Rat outer_lo = rat(qa) * rat(qa - pair.n);
        const Rat outer_hi = rat(pair.q) * rat(pair.q) * rat(pair.n - 1) / rat(qa - 2);
        const Rat inner_lo = rat(qa - pair.n);
        const Rat inner_hi = rat(qa) * rat(pair.n - 1) / rat(qa - 2);
        verdict.outer_band = RationalInterval(outer_lo, outer_hi);
        verdict.inner_band = RationalInterval(inner_lo, inner_hi);
        if (outer_lo <= abs_a && abs_a <= outer_hi) {
            verdict.status = ConnectStatus::Connected;
            verdict.branch = CriterionBranch::MainBandOuter;
            verdict.satisfied_inequality = band_text(outer_lo, abs_a, outer_hi);
        } else if (inner_lo <= abs_a && abs_a <= inner_hi) {
            verdict.status = ConnectStatus::Connected;
            verdict.branch = CriterionBranch::MainBandInner;
            verdict.satisfied_inequality = band_text(inner_lo, abs_a, inner_hi);
        } else {
            verdict.status = ConnectStatus::Disconnected;
            verdict.branch = CriterionBranch::None;
            verdict.satisfied_inequality = "|a| = " + format_rational(abs_a) + " outside [" +
                                           format_rational(outer_lo) + ", " + format_rational(outer_hi) +
                                           "] and [" + format_rational(inner_lo) + ", " +
                                           format_rational(inner_hi) + "]";
        }
        return verdict;
    }

    if (pair.m == pair.p && pair.n == qa) {
        const Rat threshold = rat(qa) * rat(pair.q > 0 ? qa - 1 : qa + 1);
        if (abs_a <= threshold) {
            verdict.status = ConnectStatus::Connected;
            verdict.branch = CriterionBranch::StandardDigits;
            verdict.satisfied_inequality =
                "|a| = " + format_rational(abs_a) + " <= " + format_rational(threshold);
        } else {
            verdict.status = ConnectStatus::Disconnected;
            verdict.branch = CriterionBranch::None;
            verdict.satisfied_inequality =
                "|a| = " + format_rational(abs_a) + " > " + format_rational(threshold);
        }
        return verdict;
    }

    verdict.status = ConnectStatus::OutOfScope;
    verdict.branch = CriterionBranch::None;
    verdict.satisfied_inequality = "no proven criterion covers these parameters";
    return verdict;
}

ConnectVerdict decide_any(const AffinePair& pair) { return decide(normalize_sign(pair)); }

HorizontalGap horizontal_gap_bound(const AffinePair& pair) {
    require_valid(pair);
    const long long ap = abs_ll(pair.p);
    if (!(ap + 1 < pair.m && pair.m < 2 * ap - 1)) {
        throw invalid_input("horizontal gap bound requires the digit window p+1 < m < 2p-1");
    }
    const Rat width = rat(pair.m - 1, ap - 1);
    HorizontalGap gap;
    gap.max_column_offset = 1;
    gap.x_difference_range = RationalInterval(-width, width);
    return gap;
}

bool column_adjacent(const AffinePair& pair) {
    require_valid(pair);
    const long long qa = abs_ll(pair.q);
    return rat_abs(pair.a) * rat(qa - 2) <= rat(pair.q) * rat(pair.q) * rat(pair.n - 1);
}

bool vertical_adjacent(const AffinePair& pair) {
    require_valid(pair);
    const long long qa = abs_ll(pair.q);
    if (qa == 2) return true;
    const Rat abs_a = rat_abs(pair.a);
    const Rat lo = rat(qa) * rat(qa - pair.n);
    const Rat hi = rat(pair.q) * rat(pair.q) * rat(pair.n - 1) / rat(qa - 2);
    return lo <= abs_a && abs_a <= hi;
}

bool diagonal_adjacent(const AffinePair& pair) {
    require_valid(pair);
    const long long qa = abs_ll(pair.q);
    if (qa < 3) throw invalid_input("diagonal adjacency band requires |q| >= 3");
    const Rat abs_a = rat_abs(pair.a);
    const Rat lo = rat(qa - pair.n);
    const Rat hi = rat(qa) * rat(pair.n - 1) / rat(qa - 2);
    return lo <= abs_a && abs_a <= hi;
}

IntersectionCondition piece_pair_condition(const AffinePair& pair, long long column_offset,
                                           long long row_offset) {
    require_normalized(pair, "piece_pair_condition");
    const long long qa = abs_ll(pair.q);
    if (2 * pair.n < qa + 1) {
        throw invalid_input("row digit sums fill a full interval only when 2n >= |q|+1");
    }
    const Rat mu = rat(pair.n - 1, qa - 1);
    const Rat shift = rat(-row_offset);
    IntersectionCondition cond;
    cond.target = RationalInterval(shift - mu, shift + mu);
    if (column_offset == 0) {
        if (row_offset == 0) throw invalid_input("a piece does not need an intersection test against itself");
        cond.space = SequenceSpace{SpaceKind::SumZero, pair.p, pair.m};
        cond.functional = ValueFunctional::shear_series(pair.p, pair.q, rat(pair.q) * pair.a, rat(0));
    } else if (column_offset == 1) {
        cond.space = SequenceSpace{SpaceKind::SumOne, pair.p, pair.m};
        cond.functional =
            ValueFunctional::shear_series(pair.p, pair.q, rat(-pair.q) * pair.a, pair.a / rat(pair.p));
    } else {
        throw invalid_input("piece pair conditions cover column offsets 0 and 1 only");
    }
    return cond;
}

IntersectionCondition intersection_condition_interval(const AffinePair& pair, IntersectionCase which) {
    switch (which) {
        case IntersectionCase::SameColumn: return piece_pair_condition(pair, 0, 1);
        case IntersectionCase::NextColumnSameRow: return piece_pair_condition(pair, 1, 0);
        case IntersectionCase::NextColumnNextRow: return piece_pair_condition(pair, 1, 1);
        case IntersectionCase::NextColumnPrevRow: return piece_pair_condition(pair, 1, -1);
        case IntersectionCase::ColumnCrossing: break;
    }
    require_normalized(pair, "intersection_condition_interval");
    const long long qa = abs_ll(pair.q);
    if (2 * pair.n < qa + 1) {
        throw invalid_input("row digit sums fill a full interval only when 2n >= |q|+1");
    }
    const Rat mu = rat(pair.n - 1, qa - 1);
    IntersectionCondition cond;
    cond.space = SequenceSpace{SpaceKind::SumOne, pair.p, pair.m};
    cond.functional =
        ValueFunctional::shear_series(pair.p, pair.q, -pair.a, pair.a / (rat(pair.p) * rat(pair.q)));
    cond.target = RationalInterval(-mu, mu);
    return cond;
}

AdjacencyMatrix adjacency_predicates(const AffinePair& pair, long long depth, long long node_budget) {
    auto run = [&](IntersectionCase which) {
        const IntersectionCondition cond = intersection_condition_interval(pair, which);
        return extremal::attainable(cond.space, cond.functional, cond.target, depth, node_budget).status;
    };
    AdjacencyMatrix matrix;
    matrix.horizontal = run(IntersectionCase::NextColumnSameRow);
    matrix.vertical = run(IntersectionCase::SameColumn);
    matrix.diag_up = run(IntersectionCase::NextColumnNextRow);
    matrix.diag_down = run(IntersectionCase::NextColumnPrevRow);
    matrix.column = column_adjacent(pair);
    matrix.depth_used = depth;
    return matrix;
}

OracleDecision oracle_decide(const AffinePair& pair, long long depth, long long node_budget) {
    require_normalized(pair, "oracle_decide");
    if (pair.m >= 2 * pair.p - 1) {
        throw invalid_input("the column gap bound needs m < 2p-1; wider digit ranges are unsupported");
    }
    OracleDecision decision;
    decision.depth_used = depth;
    for (long long d = 1; d < pair.n; ++d) {
        const IntersectionCondition cond = piece_pair_condition(pair, 0, d);
        decision.classes.push_back(
            {0, d, extremal::attainable(cond.space, cond.functional, cond.target, depth, node_budget).status});
    }
    for (long long d = -(pair.n - 1); d <= pair.n - 1; ++d) {
        const IntersectionCondition cond = piece_pair_condition(pair, 1, d);
        decision.classes.push_back(
            {1, d, extremal::attainable(cond.space, cond.functional, cond.target, depth, node_budget).status});
    }

    const auto piece_id = [&](long long i, long long j) {
        return static_cast<std::size_t>(i * pair.n + j);
    };
    const auto connected_with = [&](bool include_unknown) {
        DisjointSets components(static_cast<std::size_t>(pair.m * pair.n));
        for (const auto& cls : decision.classes) {
            if (cls.status == Attainability::Unattainable) continue;
            if (cls.status == Attainability::Unknown && !include_unknown) continue;
            for (long long i = 0; i + cls.column_offset < pair.m; ++i) {
                for (long long j = 0; j < pair.n; ++j) {
                    const long long jj = j + cls.row_offset;
                    if (jj < 0 || jj >= pair.n) continue;
                    components.unite(piece_id(i, j), piece_id(i + cls.column_offset, jj));
                }
            }
        }
        return components.component_count() == 1;
    };

    if (connected_with(false)) {
        decision.status = OracleStatus::Connected;
    } else if (!connected_with(true)) {
        decision.status = OracleStatus::Disconnected;
    } else {
        decision.status = OracleStatus::Unknown;
    }
    return decision;
}

namespace {

Attainability resolved_attainability(const AffinePair& pair, IntersectionCase which, long long depth,
                                     long long node_budget, std::optional<Rat>* value_out = nullptr) {
    const IntersectionCondition cond = intersection_condition_interval(pair, which);
    const auto result = extremal::attainable(cond.space, cond.functional, cond.target, depth, node_budget);
    if (value_out != nullptr) *value_out = result.witness_value;
    return result.status;
}

}  // namespace

ChainWitness chain_witness(const AffinePair& pair, long long depth, long long node_budget) {
    const ConnectVerdict verdict = decide(pair);
    if (verdict.status != ConnectStatus::Connected ||
        (verdict.branch != CriterionBranch::MainBandOuter &&
         verdict.branch != CriterionBranch::MainBandInner)) {
        throw invalid_input("piece chain construction requires a Connected verdict through one of the two decision bands");
    }
    const long long m = pair.m;
    const long long n = pair.n;
    const long long qa = abs_ll(pair.q);
    const Rat mu = rat(n - 1, qa - 1);

    ChainWitness chain;
    auto push = [&](long long i, long long j, LinkKind kind) {
        chain.order.emplace_back(i, j);
        chain.links.push_back(kind);
    };

    if (verdict.branch == CriterionBranch::MainBandOuter) {
        if (resolved_attainability(pair, IntersectionCase::SameColumn, depth, node_budget) !=
            Attainability::Attainable) {
            throw budget_exceeded("vertical adjacency unresolved at this depth");
        }
        std::optional<Rat> crossing_value;
        if (resolved_attainability(pair, IntersectionCase::ColumnCrossing, depth, node_budget,
                                   &crossing_value) != Attainability::Attainable ||
            !crossing_value.has_value()) {
            throw budget_exceeded("column crossing witness unresolved at this depth");
        }
        const Rat f_cross = rat(pair.q) * *crossing_value;
        long long delta = nearest_integer(-f_cross);
        delta = std::clamp(delta, -(n - 1), n - 1);
        if (rat_abs(f_cross + rat(delta)) > mu) {
            throw std::logic_error("column crossing witness does not select a row pair");
        }
        const long long jstar = std::max(0LL, -delta);
        const long long kstar = jstar + delta;

        chain.order.emplace_back(0, 0);
        for (long long j = 1; j < n; ++j) push(0, j, LinkKind::Vertical);
        for (long long j = n - 2; j >= jstar; --j) push(0, j, LinkKind::Vertical);
        push(1, kstar, LinkKind::ColumnCrossing);
        for (long long i = 1; i < m; ++i) {
            for (long long j = kstar + 1; j < n; ++j) push(i, j, LinkKind::Vertical);
            for (long long j = n - 2; j >= 0; --j) push(i, j, LinkKind::Vertical);
            if (i + 1 < m) {
                for (long long j = 1; j <= jstar; ++j) push(i, j, LinkKind::Vertical);
                push(i + 1, kstar, LinkKind::ColumnCrossing);
            }
        }
    } else {
        if (resolved_attainability(pair, IntersectionCase::NextColumnSameRow, depth, node_budget) !=
            Attainability::Attainable) {
            throw budget_exceeded("horizontal adjacency unresolved at this depth");
        }
        const Attainability up =
            resolved_attainability(pair, IntersectionCase::NextColumnNextRow, depth, node_budget);
        bool use_up = (up == Attainability::Attainable);
        if (!use_up) {
            const Attainability down =
                resolved_attainability(pair, IntersectionCase::NextColumnPrevRow, depth, node_budget);
            if (down != Attainability::Attainable) {
                throw budget_exceeded("diagonal adjacency unresolved at this depth");
            }
        }
        const auto row = [&](long long j) { return use_up ? j : n - 1 - j; };
        chain.order.emplace_back(0, row(n - 1));
        for (long long t = 0; t + 1 < m; ++t) {
            if (t % 2 == 0) {
                for (long long j = n - 1; j >= 0; --j) {
                    push(t + 1, row(j), LinkKind::Horizontal);
                    if (j > 0) push(t, row(j - 1), LinkKind::Diagonal);
                }
            } else {
                push(t + 1, row(0), LinkKind::Horizontal);
                push(t, row(0), LinkKind::Horizontal);
                for (long long j = 1; j < n; ++j) {
                    push(t + 1, row(j), LinkKind::Diagonal);
                    if (j + 1 < n) push(t, row(j), LinkKind::Horizontal);
                }
            }
        }
    }

    std::set<std::pair<long long, long long>> seen(chain.order.begin(), chain.order.end());
    if (seen.size() != static_cast<std::size_t>(m * n)) {
        throw std::logic_error("piece chain failed to cover every piece");
    }
    return chain;
}

}  // namespace selfaffine::connectivity
