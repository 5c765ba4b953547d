#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfaffine/params.hpp"
#include "selfaffine/rational.hpp"

namespace selfaffine::tiling {

inline constexpr long long default_point_budget = 1'000'000;

/* One length-k digit word: column digits x_i in {0..m-1} and row digits
   y_i in {0..n-1}.  Its image under the level-k expansion is

       ( sum x_i p^i ,  sum y_i q^i + a * sum_{i>=1} shear_coeff(p,q,i) x_i ). */
struct DigitWord {
    std::vector<long long> x;
    std::vector<long long> y;

    bool operator==(const DigitWord&) const = default;
};

using TilePoint = std::pair<Rat, Rat>;

TilePoint digit_word_image(const AffinePair& pair, const DigitWord& word);

// Two distinct digit words of the same length mapping to one point.
struct CollisionWitness {
    long long level = 0;
    DigitWord first;
    DigitWord second;
};

// The level-k expansion set: mn^k images, deduplicated.
struct DigitPointSet {
    long long k = 0;
    std::vector<TilePoint> points; // sorted, unique
    std::optional<CollisionWitness> collision;
};

/* Enumerates digit words of length k in lexicographic order (leading digit
   most significant, digits ordered by column then row) and collects their
   images.  The first word whose image repeats an earlier one is recorded
   together with that earlier word.  Throws budget_exceeded when the level
   needs more than point_budget words. */
DigitPointSet enumerate_digit_set(const AffinePair& pair, long long k,
                                  long long point_budget = default_point_budget);

enum class ProbeStatus { Pass, Fail, Unknown };

std::string to_string(ProbeStatus status);

struct CardinalityProbe {
    ProbeStatus status = ProbeStatus::Unknown;
    struct Level {
        long long k = 0;
        long long count = 0;
        long long expected = 0; // |pq|^k
    };
    std::vector<Level> levels;
    std::optional<CollisionWitness> witness;
    std::string note; // set when probing stopped before k_max
};

/* Checks #D_k = |pq|^k level by level.  Fail carries the first collision;
   running out of budget before k_max yields Unknown with the levels that
   did fit. */
CardinalityProbe cardinality_probe(const AffinePair& pair, long long k_max,
                                   long long point_budget = default_point_budget);

struct DiscretenessLevel {
    long long k = 0;
    Rat min_distance; // exact minimal pairwise max-norm distance in D_k
};

/* Advisory probe: exact minimal pairwise distances per level, for as many
   levels up to k_max as the budget allows (at least one).  A floor that
   holds across levels is evidence for uniform discreteness, never proof. */
std::vector<DiscretenessLevel> discreteness_probe(const AffinePair& pair, long long k_max,
                                                  long long point_budget = default_point_budget);

enum class TileStatus { Tile, NotTile, Unknown };

enum class TileCase {
    MLessP,              // m < |p|: row digits overflow, explicit level-2 collision
    MEqualsP,            // m = |p|: always a tile
    MGreaterP_aZero,     // m > |p|, a = 0: column digits overflow
    MGreaterP_aIntWideN, // m > |p|, integer a != 0, 2n-1 >= |q|: shear collision
    OutsideClassification,
};

std::string to_string(TileStatus status);
std::string to_string(TileCase tile_case);

struct TileVerdict {
    TileStatus status = TileStatus::Unknown;
    TileCase tile_case = TileCase::OutsideClassification;
    std::optional<CollisionWitness> witness;
    std::optional<CardinalityProbe> probe; // attached to Unknown verdicts
};

/* Closed-form classification for m*n = |pq| (anything else is rejected as
   "not a candidate tile digit set").  Every NotTile verdict carries a
   collision witness that substitutes exactly; the region the classification
   leaves open returns Unknown with probe evidence attached. */
TileVerdict classify_tile(const AffinePair& pair,
                          long long point_budget = default_point_budget);

} // namespace selfaffine::tiling
