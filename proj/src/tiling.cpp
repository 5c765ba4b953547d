#include "selfaffine/tiling.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace selfaffine::tiling {

namespace {

void require_candidate(const AffinePair& pair, const char* where) {
    require_valid(pair);
    if (pair.m * pair.n != std::abs(pair.p * pair.q)) {
        throw invalid_input(std::string(where) + ": not a candidate tile digit set");
    }
}

// (m*n)^k, saturated just past the budget so the comparison stays exact
long long words_at_level(const AffinePair& pair, long long k, long long budget) {
    Int need = int_pow(Int(pair.m * pair.n), k);
    if (need > budget) return budget + 1;
    return static_cast<long long>(need);
}

DigitWord word_of_index(const AffinePair& pair, long long k, long long index) {
    DigitWord word;
    word.x.assign(static_cast<size_t>(k), 0);
    word.y.assign(static_cast<size_t>(k), 0);
    for (long long level = k - 1; level >= 0; --level) {
        const long long digit = index % (pair.m * pair.n);
        index /= pair.m * pair.n;
        word.x[static_cast<size_t>(level)] = digit / pair.n;
        word.y[static_cast<size_t>(level)] = digit % pair.n;
    }
    return word;
}

struct LevelTables {
    std::vector<Rat> x_step;  // p^i
    std::vector<Rat> y_step;  // q^i
    std::vector<Rat> shear;   // a * R_i, lower-left of a A^i

    LevelTables(const AffinePair& pair, long long k) {
        x_step.reserve(static_cast<size_t>(k));
        y_step.reserve(static_cast<size_t>(k));
        shear.reserve(static_cast<size_t>(k));
        for (long long i = 0; i < k; ++i) {
            x_step.push_back(rat_pow(Rat(pair.p), i));
            y_step.push_back(rat_pow(Rat(pair.q), i));
            shear.push_back(pair.a * shear_coeff(pair.p, pair.q, i));
        }
    }
};

struct Enumeration {
    std::map<TilePoint, long long> first_seen; // image -> first word index
    std::optional<CollisionWitness> collision;
};

Enumeration enumerate_words(const AffinePair& pair, long long k, long long point_budget) {
    require_valid(pair);
    if (k < 1) throw invalid_input("digit set level must be >= 1");
    const long long total = words_at_level(pair, k, point_budget);
    if (total > point_budget) {
        throw budget_exceeded("digit set needs " + int_pow(Int(pair.m * pair.n), k).str() +
                              " points; the point budget is " + std::to_string(point_budget));
    }
    const LevelTables tables(pair, k);
    Enumeration out;
    std::vector<long long> digits(static_cast<size_t>(k), 0);
    for (long long index = 0; index < total; ++index) {
        Rat x = 0;
        Rat y = 0;
        for (long long level = 0; level < k; ++level) {
            const size_t l = static_cast<size_t>(level);
            const long long xd = digits[l] / pair.n;
            const long long yd = digits[l] % pair.n;
            if (xd != 0) {
                x += Rat(xd) * tables.x_step[l];
                y += Rat(xd) * tables.shear[l];
            }
            if (yd != 0) y += Rat(yd) * tables.y_step[l];
        }
        auto [slot, inserted] = out.first_seen.emplace(TilePoint{std::move(x), std::move(y)}, index);
        if (!inserted && !out.collision.has_value()) {
            out.collision = CollisionWitness{k, word_of_index(pair, k, slot->second),
                                             word_of_index(pair, k, index)};
        }
        for (long long level = k - 1; level >= 0; --level) {
            const size_t l = static_cast<size_t>(level);
            if (++digits[l] < pair.m * pair.n) break;
            digits[l] = 0;
        }
    }
    return out;
}

// exact closest pair under the max norm: plane sweep over x with a window of
// the current best radius, candidates ordered by y
Rat min_pairwise_distance(const std::vector<TilePoint>& points) {
    Rat best = std::max(rat_abs(points[1].first - points[0].first),
                        rat_abs(points[1].second - points[0].second));
    std::set<std::pair<Rat, Rat>> active; // (y, x)
    size_t trail = 0;
    for (const auto& [x, y] : points) {
        while (points[trail].first < x - best) {
            active.erase({points[trail].second, points[trail].first});
            ++trail;
        }
        for (auto it = active.lower_bound({y - best, x - best});
             it != active.end() && it->first <= y + best; ++it) {
            const Rat d = std::max(rat_abs(x - it->second), rat_abs(y - it->first));
            if (d < best) best = d;
        }
        active.insert({y, x});
    }
    return best;
}

long long least_reachable_level(long long q, long long n, const Rat& a) {
    const Int target = boost::multiprecision::abs(numerator(a));
    const long long qa = std::abs(q);
    Int reach = n - 1; // (n-1)(|q|^{k+1}-1)/(|q|-1) at k = 0
    long long k = 0;
    while (reach < target) {
        reach = reach * qa + (n - 1);
        ++k;
    }
    return k;
}

// digits d_i with |d_i| <= n-1 and sum d_i q^i = target
std::optional<std::vector<long long>> balanced_digits_greedy(long long q, long long n,
                                                             Int target) {
    std::vector<long long> digits;
    while (target != 0) {
        if (digits.size() > 256) return std::nullopt;
        long long chosen = 0;
        bool found = false;
        Int best_quotient = 0;
        for (long long d = -(n - 1); d <= n - 1; ++d) {
            if ((target - d) % q != 0) continue;
            const Int quotient = (target - d) / q;
            const Int mag = boost::multiprecision::abs(quotient);
            const bool better =
                !found || mag < boost::multiprecision::abs(best_quotient) ||
                (mag == boost::multiprecision::abs(best_quotient) &&
                 (std::abs(d) < std::abs(chosen) ||
                  (std::abs(d) == std::abs(chosen) && d < chosen)));
            if (better) {
                chosen = d;
                best_quotient = quotient;
                found = true;
            }
        }
        if (!found) return std::nullopt;
        digits.push_back(chosen);
        target = best_quotient;
    }
    if (digits.empty()) digits.push_back(0);
    return digits;
}

std::optional<std::vector<long long>> balanced_digits_exhaustive(long long q, long long n,
                                                                 const Int& target,
                                                                 long long length) {
    std::vector<long long> digits(static_cast<size_t>(length), -(n - 1));
    while (true) {
        Int sum = 0;
        for (long long i = length - 1; i >= 0; --i) {
            sum = sum * q + digits[static_cast<size_t>(i)];
        }
        if (sum == target) return digits;
        long long level = 0;
        while (level < length && ++digits[static_cast<size_t>(level)] > n - 1) {
            digits[static_cast<size_t>(level)] = -(n - 1);
            ++level;
        }
        if (level == length) return std::nullopt;
    }
}

CollisionWitness shear_collision_witness(const AffinePair& pair) {
    const Int target = -numerator(pair.a); // sum (y_i - y'_i) q^i must equal -a
    auto digits = balanced_digits_greedy(pair.q, pair.n, target);
    if (!digits.has_value()) {
        const long long base = least_reachable_level(pair.q, pair.n, pair.a) + 1;
        for (long long length = base; length <= base + 3 && !digits.has_value(); ++length) {
            digits = balanced_digits_exhaustive(pair.q, pair.n, target, length);
        }
    }
    if (!digits.has_value()) {
        throw budget_exceeded("no balanced digit expansion of the shear found");
    }
    const long long level = std::max<long long>(2, static_cast<long long>(digits->size()));
    CollisionWitness witness;
    witness.level = level;
    witness.first.x.assign(static_cast<size_t>(level), 0);
    witness.first.y.assign(static_cast<size_t>(level), 0);
    witness.second = witness.first;
    if (pair.p > 0) {
        witness.first.x[0] = pair.p;
        witness.second.x[1] = 1;
    } else {
        witness.second.x[0] = -pair.p;
        witness.second.x[1] = 1;
    }
    for (size_t i = 0; i < digits->size(); ++i) {
        const long long d = (*digits)[i];
        if (d >= 0) {
            witness.first.y[i] = d;
        } else {
            witness.second.y[i] = -d;
        }
    }
    return witness;
}

} // namespace

TilePoint digit_word_image(const AffinePair& pair, const DigitWord& word) {
    require_valid(pair);
    if (word.x.size() != word.y.size() || word.x.empty()) {
        throw invalid_input("digit word needs matching x and y digit counts");
    }
    TilePoint image{Rat(0), Rat(0)};
    for (size_t i = 0; i < word.x.size(); ++i) {
        if (word.x[i] < 0 || word.x[i] >= pair.m || word.y[i] < 0 || word.y[i] >= pair.n) {
            throw invalid_input("digit word leaves the digit set");
        }
        const long long level = static_cast<long long>(i);
        image.first += Rat(word.x[i]) * rat_pow(Rat(pair.p), level);
        image.second += Rat(word.y[i]) * rat_pow(Rat(pair.q), level) +
                        pair.a * shear_coeff(pair.p, pair.q, level) * Rat(word.x[i]);
    }
    return image;
}

DigitPointSet enumerate_digit_set(const AffinePair& pair, long long k, long long point_budget) {
    Enumeration enumeration = enumerate_words(pair, k, point_budget);
    DigitPointSet out;
    out.k = k;
    out.points.reserve(enumeration.first_seen.size());
    for (auto& [point, index] : enumeration.first_seen) {
        out.points.push_back(point);
    }
    out.collision = std::move(enumeration.collision);
    return out;
}

std::string to_string(ProbeStatus status) {
    switch (status) {
    case ProbeStatus::Pass: return "pass";
    case ProbeStatus::Fail: return "fail";
    default: return "unknown";
    }
}

CardinalityProbe cardinality_probe(const AffinePair& pair, long long k_max,
                                   long long point_budget) {
    require_candidate(pair, "cardinality_probe");
    if (k_max < 1) throw invalid_input("cardinality_probe needs k_max >= 1");
    CardinalityProbe probe;
    for (long long k = 1; k <= k_max; ++k) {
        if (words_at_level(pair, k, point_budget) > point_budget) {
            probe.status = ProbeStatus::Unknown;
            probe.note = "level " + std::to_string(k) + " needs " +
                         int_pow(Int(pair.m * pair.n), k).str() +
                         " points; the point budget is " + std::to_string(point_budget);
            return probe;
        }
        Enumeration enumeration = enumerate_words(pair, k, point_budget);
        probe.levels.push_back({k, static_cast<long long>(enumeration.first_seen.size()),
                                words_at_level(pair, k, point_budget)});
        if (enumeration.collision.has_value()) {
            probe.status = ProbeStatus::Fail;
            probe.witness = std::move(enumeration.collision);
            return probe;
        }
    }
    probe.status = ProbeStatus::Pass;
    return probe;
}

std::vector<DiscretenessLevel> discreteness_probe(const AffinePair& pair, long long k_max,
                                                  long long point_budget) {
    require_candidate(pair, "discreteness_probe");
    if (k_max < 1) throw invalid_input("discreteness_probe needs k_max >= 1");
    std::vector<DiscretenessLevel> out;
    for (long long k = 1; k <= k_max; ++k) {
        if (words_at_level(pair, k, point_budget) > point_budget) break;
        DigitPointSet level = enumerate_digit_set(pair, k, point_budget);
        out.push_back({k, min_pairwise_distance(level.points)});
    }
    if (out.empty()) {
        throw budget_exceeded("digit set needs " + Int(pair.m * pair.n).str() +
                              " points; the point budget is " + std::to_string(point_budget));
    }
    return out;
}

std::string to_string(TileStatus status) {
    switch (status) {
    case TileStatus::Tile: return "tile";
    case TileStatus::NotTile: return "not-tile";
    default: return "unknown";
    }
}

std::string to_string(TileCase tile_case) {
    switch (tile_case) {
    case TileCase::MLessP: return "row-digit-overflow";
    case TileCase::MEqualsP: return "standard-column-count";
    case TileCase::MGreaterP_aZero: return "column-digit-overflow";
    case TileCase::MGreaterP_aIntWideN: return "shear-collision";
    default: return "outside-classification";
    }
}

TileVerdict classify_tile(const AffinePair& pair, long long point_budget) {
    require_candidate(pair, "classify_tile");
    TileVerdict verdict;
    const long long pa = std::abs(pair.p);
    const long long qa = std::abs(pair.q);
    if (pair.m < pa) {
        verdict.status = TileStatus::NotTile;
        verdict.tile_case = TileCase::MLessP;
        CollisionWitness witness;
        witness.level = 2;
        witness.first = DigitWord{{0, 0}, {0, 0}};
        witness.second = DigitWord{{0, 0}, {0, 0}};
        if (pair.q > 0) {
            witness.first.y = {pair.q, 0};
            witness.second.y = {0, 1};
        } else {
            witness.second.y = {qa, 1};
        }
        verdict.witness = std::move(witness);
        return verdict;
    }
    if (pair.m == pa) {
        verdict.status = TileStatus::Tile;
        verdict.tile_case = TileCase::MEqualsP;
        return verdict;
    }
    if (pair.a == 0) {
        verdict.status = TileStatus::NotTile;
        verdict.tile_case = TileCase::MGreaterP_aZero;
        CollisionWitness witness;
        witness.level = 2;
        witness.first = DigitWord{{0, 0}, {0, 0}};
        witness.second = DigitWord{{0, 0}, {0, 0}};
        if (pair.p > 0) {
            witness.first.x = {pair.p, 0};
            witness.second.x = {0, 1};
        } else {
            witness.second.x = {pa, 1};
        }
        verdict.witness = std::move(witness);
        return verdict;
    }
    if (is_integer(pair.a) && 2 * pair.n - 1 >= qa) {
        verdict.status = TileStatus::NotTile;
        verdict.tile_case = TileCase::MGreaterP_aIntWideN;
        verdict.witness = shear_collision_witness(pair);
        return verdict;
    }
    verdict.status = TileStatus::Unknown;
    verdict.tile_case = TileCase::OutsideClassification;
    long long k_max = 1;
    while (k_max < 4 && words_at_level(pair, k_max + 1, point_budget) <= point_budget) {
        ++k_max;
    }
    verdict.probe = cardinality_probe(pair, k_max, point_budget);
    return verdict;
}

} // namespace selfaffine::tiling
