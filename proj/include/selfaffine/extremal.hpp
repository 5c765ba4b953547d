#pragma once

#include "selfaffine/sequences.hpp"

#include <optional>
#include <string>

namespace selfaffine::extremal {

/* Two-sided enclosure of the supremum and infimum of a functional over a
   sequence space, from exhausting all completable depth-limited prefixes and
   padding with the functional's tail bound.  certified is false when the
   space itself is empty (the intervals are then a-priori bounds only). */
struct ExtremeEnclosure {
    RationalInterval max_enclosure;
    RationalInterval min_enclosure;
    Rat max_prefix; // exact extreme over depth-limited prefixes (offset included)
    Rat min_prefix;
    Rat tail;       // padding applied on each side
    long long depth = 0;
    bool certified = false;
};

ExtremeEnclosure enumerate_extremes(const SequenceSpace& space, const ValueFunctional& functional,
                                    long long depth);

/* Exact supremum/infimum with attaining eventually periodic witnesses, for
   geometric functionals.  Computed by policy iteration over the residual
   automaton and certified by an exact Bellman optimality check. */
struct ExactExtremes {
    Rat max_value;
    Rat min_value;
    PeriodicSequence argmax;
    PeriodicSequence argmin;
};

ExactExtremes exact_geometric_extremes(const SequenceSpace& space, long long q);

/* Closed-form extremes for the four space/functional pairings used by the
   connectedness bands.  Proven only inside the window p+1 < m < 2p-1 (where
   they are independent of m); other m throw invalid_input. */
struct ClosedExtremes {
    Rat max_value;
    Rat min_value;
};

ClosedExtremes closed_extremes(const SequenceSpace& space, const ValueFunctional& functional);

struct ExtremesReport {
    long long p, q, m;
    long long depth;
    ClosedExtremes geometric_sum_one, geometric_sum_zero;
    ClosedExtremes weighted_sum_one, weighted_sum_zero;
    ExtremeEnclosure geometric_sum_one_enclosure, geometric_sum_zero_enclosure;
    ExtremeEnclosure weighted_sum_one_enclosure, weighted_sum_zero_enclosure;
};

ExtremesReport extremes_report(long long p, long long q, long long m, long long depth);

enum class Attainability { Attainable, Unattainable, Unknown };

std::string to_string(Attainability a);

struct AttainabilityResult {
    Attainability status = Attainability::Unknown;
    std::optional<PeriodicSequence> witness; // present iff Attainable
    std::optional<Rat> witness_value;        // exact functional value of the witness
    long long depth_used = 0;
    std::string note;
};

/* Decides whether the functional meets the target interval somewhere on the
   space.  Attainable answers carry an exact verified witness; Unattainable
   answers come from complete interval pruning; Unknown only on exhausted
   depth or node budget. */
AttainabilityResult attainable(const SequenceSpace& space, const ValueFunctional& functional,
                               const RationalInterval& target, long long depth = 24,
                               long long node_budget = 2'000'000);

bool check_witness(const SequenceSpace& space, const ValueFunctional& functional,
                   const RationalInterval& target, const PeriodicSequence& witness);

} // namespace selfaffine::extremal
