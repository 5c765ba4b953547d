#include "doctest.h"

#include "selfaffine/tiling.hpp"

using namespace selfaffine;
using namespace selfaffine::tiling;

namespace {

AffinePair pair_of(long long p, long long q, Rat a, long long m, long long n) {
    AffinePair pr;
    pr.p = p;
    pr.q = q;
    pr.a = std::move(a);
    pr.m = m;
    pr.n = n;
    return pr;
}

void check_collides(const AffinePair& pr, const CollisionWitness& witness) {
    CHECK(witness.first != witness.second);
    CHECK(witness.first.x.size() == static_cast<size_t>(witness.level));
    CHECK(digit_word_image(pr, witness.first) == digit_word_image(pr, witness.second));
}

} // namespace

TEST_CASE("digit set expansion enumerates exact images") {
    SUBCASE("level one is the digit set itself") {
        for (const AffinePair& pr : {pair_of(4, 3, rat(1), 3, 4), pair_of(2, -6, rat(7, 2), 4, 3),
                                     pair_of(-3, 3, rat(0), 3, 3)}) {
            const DigitPointSet level = enumerate_digit_set(pr, 1);
            CHECK(level.points.size() == static_cast<size_t>(pr.m * pr.n));
            CHECK_FALSE(level.collision.has_value());
        }
    }
    SUBCASE("row digits overflowing the base collide at level two") {
        const AffinePair pr = pair_of(4, 3, rat(1), 3, 4);
        const DigitPointSet level = enumerate_digit_set(pr, 2);
        CHECK(level.points.size() < 144);
        REQUIRE(level.collision.has_value());
        CHECK(level.collision->level == 2);
        CHECK(level.collision->first == DigitWord{{0, 0}, {0, 1}});
        CHECK(level.collision->second == DigitWord{{0, 0}, {3, 0}});
        check_collides(pr, *level.collision);
        CHECK(digit_word_image(pr, level.collision->first) == TilePoint{rat(0), rat(3)});
    }
    SUBCASE("a full rank pair stays collision free") {
        const DigitPointSet level = enumerate_digit_set(pair_of(2, 6, rat(1), 2, 6), 3);
        CHECK(level.points.size() == 1728);
        CHECK_FALSE(level.collision.has_value());
    }
    SUBCASE("images follow the sheared expansion exactly") {
        const AffinePair pr = pair_of(2, 3, rat(1), 3, 2);
        // x contributes p^i to the first coordinate and a * R_i to the second
        CHECK(digit_word_image(pr, DigitWord{{0, 1}, {0, 0}}) == TilePoint{rat(2), rat(-1)});
        CHECK(digit_word_image(pr, DigitWord{{0, 0, 1}, {0, 0, 0}}) ==
              TilePoint{rat(4), rat(-5)});
        CHECK(digit_word_image(pr, DigitWord{{2, 0}, {1, 1}}) == TilePoint{rat(2), rat(4)});
    }
    SUBCASE("word validation") {
        const AffinePair pr = pair_of(2, 3, rat(1), 3, 2);
        CHECK_THROWS_AS(digit_word_image(pr, DigitWord{{0, 1}, {0}}), invalid_input);
        CHECK_THROWS_AS(digit_word_image(pr, DigitWord{{3}, {0}}), invalid_input);
        CHECK_THROWS_AS(digit_word_image(pr, DigitWord{{0}, {2}}), invalid_input);
        CHECK_THROWS_AS(enumerate_digit_set(pr, 0), invalid_input);
    }
    SUBCASE("budget guard names the bound") {
        CHECK_THROWS_WITH_AS(enumerate_digit_set(pair_of(2, 6, rat(1), 2, 6), 6),
                             "digit set needs 2985984 points; the point budget is 1000000",
                             budget_exceeded);
    }
}

TEST_CASE("cardinality probe finds the first failing level") {
    SUBCASE("integer shear with wide rows fails by level two") {
        const AffinePair pr = pair_of(2, 3, rat(1), 3, 2);
        const CardinalityProbe probe = cardinality_probe(pr, 6);
        CHECK(probe.status == ProbeStatus::Fail);
        REQUIRE(probe.levels.size() == 2);
        CHECK(probe.levels[0].count == 6);
        CHECK(probe.levels[0].expected == 6);
        CHECK(probe.levels[1].count < 36);
        CHECK(probe.levels[1].expected == 36);
        REQUIRE(probe.witness.has_value());
        CHECK(probe.witness->level == 2);
        check_collides(pr, *probe.witness);
    }
    SUBCASE("a tile pair passes every probed level") {
        const CardinalityProbe probe = cardinality_probe(pair_of(2, 6, rat(5), 2, 6), 3);
        CHECK(probe.status == ProbeStatus::Pass);
        REQUIRE(probe.levels.size() == 3);
        CHECK(probe.levels[2].count == 1728);
        CHECK_FALSE(probe.witness.has_value());
        CHECK(probe.note.empty());
    }
    SUBCASE("the level-two overflow collision does not involve the shear") {
        const CardinalityProbe probe = cardinality_probe(pair_of(4, 3, rat(0), 3, 4), 2);
        CHECK(probe.status == ProbeStatus::Fail);
        REQUIRE(probe.witness.has_value());
        CHECK(probe.witness->level == 2);
    }
    SUBCASE("budget exhaustion reports the partial levels") {
        const CardinalityProbe probe = cardinality_probe(pair_of(2, 6, rat(1), 2, 6), 3, 100);
        CHECK(probe.status == ProbeStatus::Unknown);
        REQUIRE(probe.levels.size() == 1);
        CHECK(probe.levels[0].count == 12);
        CHECK(probe.note == "level 2 needs 144 points; the point budget is 100");
    }
    SUBCASE("dimension hypothesis is enforced") {
        CHECK_THROWS_AS(cardinality_probe(pair_of(4, 3, rat(1), 5, 2), 2), invalid_input);
    }
}

TEST_CASE("discreteness probe reports exact level minima") {
    SUBCASE("integer lattice digits keep a unit floor") {
        const auto levels = discreteness_probe(pair_of(2, 6, rat(1), 2, 6), 3);
        REQUIRE(levels.size() == 3);
        for (const auto& level : levels) {
            CHECK(level.min_distance == rat(1));
        }
    }
    SUBCASE("level one distance is always one") {
        const auto levels = discreteness_probe(pair_of(4, 3, rat(7, 3), 3, 4), 1);
        REQUIRE(levels.size() == 1);
        CHECK(levels[0].min_distance == rat(1));
    }
    SUBCASE("fractional shear minima are reported without a verdict") {
        const auto levels = discreteness_probe(pair_of(2, 3, rat(1, 2), 3, 2), 5);
        REQUIRE(levels.size() == 5);
        for (size_t i = 0; i + 1 < levels.size(); ++i) {
            CHECK(levels[i].min_distance >= levels[i + 1].min_distance);
        }
        CHECK(levels.back().min_distance > 0);
    }
    SUBCASE("budget truncates the probed levels") {
        const auto levels = discreteness_probe(pair_of(2, 6, rat(1), 2, 6), 3, 100);
        REQUIRE(levels.size() == 1);
        CHECK_THROWS_AS(discreteness_probe(pair_of(2, 6, rat(1), 2, 6), 3, 5), budget_exceeded);
    }
}

TEST_CASE("tile classification covers the proposition cases") {
    SUBCASE("too few column digits is never a tile") {
        const TileVerdict verdict = classify_tile(pair_of(4, 3, rat(7, 3), 3, 4));
        CHECK(verdict.status == TileStatus::NotTile);
        CHECK(verdict.tile_case == TileCase::MLessP);
        REQUIRE(verdict.witness.has_value());
        CHECK(verdict.witness->level == 2);
        CHECK(verdict.witness->first == DigitWord{{0, 0}, {3, 0}});
        CHECK(verdict.witness->second == DigitWord{{0, 0}, {0, 1}});
        check_collides(pair_of(4, 3, rat(7, 3), 3, 4), *verdict.witness);
    }
    SUBCASE("the narrow-column witness is the same for every shear") {
        const TileVerdict base = classify_tile(pair_of(4, 3, rat(0), 3, 4));
        for (const Rat& a : {rat(10), rat(-5, 7), rat(1, 3)}) {
            const TileVerdict verdict = classify_tile(pair_of(4, 3, a, 3, 4));
            REQUIRE(verdict.witness.has_value());
            CHECK(verdict.witness->first == base.witness->first);
            CHECK(verdict.witness->second == base.witness->second);
            check_collides(pair_of(4, 3, a, 3, 4), *verdict.witness);
        }
    }
    SUBCASE("negative row base flips the witness") {
        const AffinePair pr = pair_of(4, -3, rat(2), 3, 4);
        const TileVerdict verdict = classify_tile(pr);
        CHECK(verdict.tile_case == TileCase::MLessP);
        REQUIRE(verdict.witness.has_value());
        CHECK(verdict.witness->first == DigitWord{{0, 0}, {0, 0}});
        CHECK(verdict.witness->second == DigitWord{{0, 0}, {3, 1}});
        check_collides(pr, *verdict.witness);
    }
    SUBCASE("matching column count is always a tile") {
        const TileVerdict verdict = classify_tile(pair_of(2, 6, rat(123), 2, 6));
        CHECK(verdict.status == TileStatus::Tile);
        CHECK(verdict.tile_case == TileCase::MEqualsP);
        CHECK_FALSE(verdict.witness.has_value());
        CHECK(classify_tile(pair_of(-2, 6, rat(3), 2, 6)).status == TileStatus::Tile);
    }
    SUBCASE("wide columns with no shear collapse a column pair") {
        const TileVerdict verdict = classify_tile(pair_of(2, 3, rat(0), 3, 2));
        CHECK(verdict.status == TileStatus::NotTile);
        CHECK(verdict.tile_case == TileCase::MGreaterP_aZero);
        REQUIRE(verdict.witness.has_value());
        CHECK(verdict.witness->first == DigitWord{{2, 0}, {0, 0}});
        CHECK(verdict.witness->second == DigitWord{{0, 1}, {0, 0}});
        check_collides(pair_of(2, 3, rat(0), 3, 2), *verdict.witness);

        const TileVerdict mirrored = classify_tile(pair_of(-2, 3, rat(0), 3, 2));
        REQUIRE(mirrored.witness.has_value());
        CHECK(mirrored.witness->first == DigitWord{{0, 0}, {0, 0}});
        CHECK(mirrored.witness->second == DigitWord{{2, 1}, {0, 0}});
        check_collides(pair_of(-2, 3, rat(0), 3, 2), *mirrored.witness);
    }
    SUBCASE("integer shear with wide rows yields the worked witness") {
        const AffinePair pr = pair_of(2, 3, rat(1), 3, 2);
        const TileVerdict verdict = classify_tile(pr);
        CHECK(verdict.status == TileStatus::NotTile);
        CHECK(verdict.tile_case == TileCase::MGreaterP_aIntWideN);
        REQUIRE(verdict.witness.has_value());
        CHECK(verdict.witness->level == 2);
        CHECK(verdict.witness->first == DigitWord{{2, 0}, {0, 0}});
        CHECK(verdict.witness->second == DigitWord{{0, 1}, {1, 0}});
        check_collides(pr, *verdict.witness);
        CHECK(digit_word_image(pr, verdict.witness->first) == TilePoint{rat(2), rat(0)});
    }
    SUBCASE("shear witnesses handle negative bases and large shears") {
        for (const AffinePair& pr :
             {pair_of(2, -3, rat(2), 3, 2), pair_of(-2, 3, rat(-7), 3, 2),
              pair_of(3, 4, rat(100), 4, 3), pair_of(2, 3, rat(-41), 3, 2)}) {
            const TileVerdict verdict = classify_tile(pr);
            CHECK(verdict.status == TileStatus::NotTile);
            CHECK(verdict.tile_case == TileCase::MGreaterP_aIntWideN);
            REQUIRE(verdict.witness.has_value());
            check_collides(pr, *verdict.witness);
        }
    }
    SUBCASE("the open region stays unknown even when the probe collides") {
        // half-integer shear doubles through the accumulated column shear, so
        // the expansion collides at level three; the classification still
        // reports Unknown and surfaces the collision as probe evidence only
        const TileVerdict verdict = classify_tile(pair_of(2, 3, rat(1, 2), 3, 2));
        CHECK(verdict.status == TileStatus::Unknown);
        CHECK(verdict.tile_case == TileCase::OutsideClassification);
        CHECK_FALSE(verdict.witness.has_value());
        REQUIRE(verdict.probe.has_value());
        CHECK(verdict.probe->status == ProbeStatus::Fail);
        REQUIRE(verdict.probe->witness.has_value());
        CHECK(verdict.probe->witness->level == 3);
        check_collides(pair_of(2, 3, rat(1, 2), 3, 2), *verdict.probe->witness);
    }
    SUBCASE("narrow rows with integer shear are also open") {
        const TileVerdict verdict = classify_tile(pair_of(2, 7, rat(3), 7, 2));
        CHECK(verdict.status == TileStatus::Unknown);
        CHECK(verdict.tile_case == TileCase::OutsideClassification);
        CHECK_FALSE(verdict.witness.has_value());
        REQUIRE(verdict.probe.has_value());
        if (verdict.probe->status == ProbeStatus::Fail) {
            check_collides(pair_of(2, 7, rat(3), 7, 2), *verdict.probe->witness);
        }
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_WITH_AS(classify_tile(pair_of(4, 3, rat(1), 5, 2)),
                             "classify_tile: not a candidate tile digit set", invalid_input);
    }
}

TEST_CASE("classification and probes agree on a parameter grid") {
    for (long long p : {2, 3, -2}) {
        for (long long q : {2, 3, -3, 6}) {
            for (long long m = 1; m <= std::abs(p * q); ++m) {
                if (std::abs(p * q) % m != 0) continue;
                const long long n = std::abs(p * q) / m;
                for (long long numerator : {0, 1, 2, -3}) {
                    const AffinePair pr = pair_of(p, q, rat(numerator), m, n);
                    const TileVerdict verdict = classify_tile(pr);
                    if (verdict.status == TileStatus::NotTile) {
                        REQUIRE(verdict.witness.has_value());
                        check_collides(pr, *verdict.witness);
                        const CardinalityProbe probe =
                            cardinality_probe(pr, verdict.witness->level);
                        CHECK(probe.status == ProbeStatus::Fail);
                        CHECK(probe.witness->level <= verdict.witness->level);
                    }
                    if (verdict.status == TileStatus::Tile) {
                        CHECK(cardinality_probe(pr, 3).status == ProbeStatus::Pass);
                    }
                }
            }
        }
    }
}
