#pragma once

#include "selfaffine/params.hpp"

#include <vector>

namespace selfaffine::extremal {

/* Coefficient sequences (c_1, c_2, ...) with |c_k| <= m-1 subject to an exact
   base-p constraint on sum c_k p^{-k}: either 1 or 0.  These two families
   parameterize how neighboring pieces of the attractor can meet. */
enum class SpaceKind { SumOne, SumZero };

struct PeriodicSequence;

struct SequenceSpace {
    SpaceKind kind = SpaceKind::SumZero;
    long long p = 2; // constraint base, >= 2
    long long m = 2; // digit count; coefficients range over {-(m-1), ..., m-1}

    long long max_coeff() const { return m - 1; }
    long long constraint() const { return kind == SpaceKind::SumOne ? 1 : 0; }

    /* Scaled remainders p^t * (constraint - partial sum) stay integral along any
       prefix; a prefix extends to a full sequence iff |remainder| <= this limit. */
    long long residual_limit() const { return max_coeff() / (p - 1); }
    bool state_feasible(long long residual) const {
        return (p - 1) * std::abs(residual) <= max_coeff();
    }
    bool feasible() const { return state_feasible(constraint()); }

    // Coefficients c admissible from a completable residual, ascending.
    std::vector<long long> coefficients_from(long long residual) const;
    long long step(long long residual, long long coeff) const { return p * residual - coeff; }

    /* Digit stream that retires the residual as fast as possible.  Usually the
       residual hits zero and the stream ends in zeros; at the clamp boundary
       (p-1)*|residual| = m-1 the greedy digit repeats forever, so the result
       carries it as a one-digit cycle. */
    PeriodicSequence canonical_completion(long long residual) const;

    void check() const; // throws invalid_input on malformed parameters
};

/* Eventually periodic coefficient stream: head digits, then cycle repeated
   forever.  An empty cycle means the stream ends in zeros.  All evaluation is
   exact via closed forms for geometric and arithmetic-geometric series. */
struct PeriodicSequence {
    std::vector<long long> head;
    std::vector<long long> cycle;

    bool operator==(const PeriodicSequence&) const = default;

    long long at(long long k) const; // 1-based
    bool all_zero() const;

    // sum_{k>=1} c_k x^k, requires |x| < 1
    Rat power_sum(const Rat& x) const;
    // sum_{k>=1} k c_k x^k, requires |x| < 1
    Rat weighted_power_sum(const Rat& x) const;

    bool in_space(const SequenceSpace& space) const;
    std::string render(long long count = 12) const; // "c1,c2,...," prefix for messages
};

/* Linear functionals offset + scale * sum_k c_k w_k over coefficient streams,
   with three weight families:
     GeometricBaseQ : w_k = q^{-k}
     WeightedBaseP  : w_k = k p^{-k}
     ShearSeries    : w_k = inverse_shear_coeff(p, q, k+1)
   The shear family is what piece-intersection equations produce. */
struct ValueFunctional {
    enum class Kind { GeometricBaseQ, WeightedBaseP, ShearSeries };

    Kind kind = Kind::GeometricBaseQ;
    long long p = 2; // used by WeightedBaseP and ShearSeries
    long long q = 2; // used by GeometricBaseQ and ShearSeries
    Rat scale = 1;
    Rat offset = 0;

    static ValueFunctional geometric(long long q, Rat scale = 1, Rat offset = 0);
    static ValueFunctional weighted(long long p, Rat scale = 1, Rat offset = 0);
    static ValueFunctional shear_series(long long p, long long q, Rat scale, Rat offset);

    // scale * w_k (the full coefficient weight); k >= 1
    Rat coefficient_weight(long long k) const;
    // bound on |scale| * |sum_{k > depth} c_k w_k| given |c_k| <= max_coeff
    Rat tail_bound(long long depth, long long max_coeff) const;
    Rat evaluate(const PeriodicSequence& seq) const;

    void check() const;
};

} // namespace selfaffine::extremal
