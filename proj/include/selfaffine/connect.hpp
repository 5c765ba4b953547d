#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfaffine/extremal.hpp"
#include "selfaffine/params.hpp"
#include "selfaffine/rational.hpp"
#include "selfaffine/sequences.hpp"

namespace selfaffine::connectivity {

enum class ConnectStatus { Connected, Disconnected, OutOfScope };

// Which closed-form criterion produced a Connected verdict.
//   QAbs2          |q| = 2, connected for every a
//   MainBandOuter  |q|(|q|-n) <= |a| <= q^2(n-1)/(|q|-2)
//   MainBandInner  |q|-n <= |a| <= |q|(n-1)/(|q|-2)
//   StandardDigits m = |p| and n = |q|, connected iff |a| <= |q|*|q-1|
enum class CriterionBranch { QAbs2, MainBandOuter, MainBandInner, StandardDigits, None };

std::string to_string(ConnectStatus status);
std::string to_string(CriterionBranch branch);

struct ConnectVerdict {
    ConnectStatus status = ConnectStatus::OutOfScope;
    CriterionBranch branch = CriterionBranch::None;
    std::string satisfied_inequality;
    HypothesisReport hypotheses;
    std::optional<RationalInterval> outer_band;
    std::optional<RationalInterval> inner_band;
};

// Closed-form decision. Requires a normalized pair (p >= 2); reports
// OutOfScope when no proven criterion covers the parameters.
ConnectVerdict decide(const AffinePair& pair);

// decide composed with normalize_sign, so negative p is accepted.
ConnectVerdict decide_any(const AffinePair& pair);

struct HorizontalGap {
    long long max_column_offset = 1;
    RationalInterval x_difference_range{Rat(0), Rat(0)};
};

// Pieces whose column indices differ by more than the returned offset are
// disjoint: the x-coordinate difference of any two points of T lies in
// [-(m-1)/(p-1), (m-1)/(p-1)], and 1 < (m-1)/(p-1) < 2 under the digit
// window hypothesis.
HorizontalGap horizontal_gap_bound(const AffinePair& pair);

// G_i and G_{i+1} intersect iff |a|(|q|-2) <= q^2(n-1).
bool column_adjacent(const AffinePair& pair);

// Band test |q|(|q|-n) <= |a| <= q^2(n-1)/(|q|-2); always true for |q| = 2.
// Characterizes vertical piece adjacency only jointly with column_adjacent.
bool vertical_adjacent(const AffinePair& pair);

// Band test |q|-n <= |a| <= |q|(n-1)/(|q|-2). Requires |q| >= 3.
bool diagonal_adjacent(const AffinePair& pair);

enum class IntersectionCase {
    SameColumn,         // S_{i,j} with S_{i,j+1}
    NextColumnSameRow,  // S_{i,j} with S_{i+1,j}
    NextColumnNextRow,  // S_{i,j} with S_{i+1,j+1}
    NextColumnPrevRow,  // S_{i,j} with S_{i+1,j-1}
    ColumnCrossing,     // G_i with G_{i+1}, row offset free
};

std::string to_string(IntersectionCase which);

struct IntersectionCondition {
    extremal::SequenceSpace space;
    extremal::ValueFunctional functional;
    RationalInterval target{Rat(0), Rat(0)};
};

// Exact reduction of a piece intersection to interval membership: the
// geometric intersection is nonempty iff the functional attains a value in
// the target over the space. Requires 2n >= |q|+1 so that the row digit
// sums fill a full interval.
IntersectionCondition intersection_condition_interval(const AffinePair& pair, IntersectionCase which);

// General form for pieces offset by (column_offset, row_offset) with
// column_offset in {0, 1}; the named cases above are specializations.
IntersectionCondition piece_pair_condition(const AffinePair& pair, long long column_offset,
                                           long long row_offset);

// Translation-invariant adjacency of neighboring pieces, decided by the
// sequence oracle except for the column predicate which has a closed form.
struct AdjacencyMatrix {
    extremal::Attainability horizontal = extremal::Attainability::Unknown;
    extremal::Attainability vertical = extremal::Attainability::Unknown;
    extremal::Attainability diag_up = extremal::Attainability::Unknown;
    extremal::Attainability diag_down = extremal::Attainability::Unknown;
    bool column = false;
    long long depth_used = 0;
};

AdjacencyMatrix adjacency_predicates(const AffinePair& pair, long long depth = 12,
                                     long long node_budget = 2'000'000);

enum class OracleStatus { Connected, Disconnected, Unknown };

std::string to_string(OracleStatus status);

struct PairClassAttainability {
    long long column_offset = 0;
    long long row_offset = 0;
    extremal::Attainability status = extremal::Attainability::Unknown;
};

struct OracleDecision {
    OracleStatus status = OracleStatus::Unknown;
    std::vector<PairClassAttainability> classes;
    long long depth_used = 0;
};

// Connectivity decided from the piece intersection graph alone: every edge
// class is resolved by the sequence oracle, then exact graph reachability
// is evaluated three-valued (Unknown edges count for neither side).
// Requires a normalized pair, m < 2p-1, and 2n >= |q|+1.
OracleDecision oracle_decide(const AffinePair& pair, long long depth = 12,
                             long long node_budget = 2'000'000);

enum class LinkKind { Vertical, ColumnCrossing, Horizontal, Diagonal };

std::string to_string(LinkKind kind);

struct ChainWitness {
    std::vector<std::pair<long long, long long>> order;
    std::vector<LinkKind> links;
};

// Explicit piece chain realizing a Connected verdict of one of the two
// decision bands: every piece appears, and consecutive pieces satisfy the
// named adjacency predicate. The column crossing row pair is extracted from
// the attainability witness of the ColumnCrossing condition.
ChainWitness chain_witness(const AffinePair& pair, long long depth = 24,
                           long long node_budget = 2'000'000);

}  // namespace selfaffine::connectivity
