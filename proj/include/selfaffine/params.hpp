#pragma once

#include "selfaffine/rational.hpp"

#include <vector>

namespace selfaffine {

/* Parameters of one instance: the expanding matrix

       A = [  p   0 ]
           [ -a   q ]

   together with the digit counts of the product digit set
   {0..m-1} x {0..n-1}.  All criteria depend on a only through
   exact rational arithmetic, so a is stored exactly. */
struct AffinePair {
    long long p = 2;
    long long q = 2;
    Rat a = 0;
    long long m = 2;
    long long n = 2;

    bool operator==(const AffinePair&) const = default;
};

// Hard domain check: |p| >= 2, |q| >= 2, m >= 1, n >= 1.  Throws invalid_input.
void require_valid(const AffinePair& pair);

struct HypothesisReport {
    bool band_hypotheses_ok = false;   // |p|+1 < m < 2|p|-1  and  n >= (|q|+1)/2
    bool standard_digits_ok = false;   // m = |p| and n = |q|
    bool tile_dimensions_ok = false;   // m*n = |p*q|
    std::vector<std::string> messages; // one entry per flag that is false
};

// Reports which hypothesis groups the parameters satisfy.  Throws on hard violations.
HypothesisReport validate(const AffinePair& pair);

/* Conjugation by diag(-1,1) flips the signs of p, q and a without changing
   the attractor up to reflection, so deciders may assume p > 0. */
AffinePair normalize_sign(const AffinePair& pair);

/* A^{-k} is lower triangular with diagonal (p^{-k}, q^{-k}) and lower-left
   entry a * inverse_shear_coeff(p,q,k).  k = 0 gives 0. */
Rat inverse_shear_coeff(long long p, long long q, long long k);

/* A^{k} has diagonal (p^k, q^k) and lower-left entry a * shear_coeff(p,q,k). */
Rat shear_coeff(long long p, long long q, long long k);

// {-(count-1), ..., -1, 0, 1, ..., count-1}
std::vector<long long> digit_difference_range(long long count);

/* Bound on |sum_{k > depth} c_k base^{-k}| when every |c_k| <= max_coeff:
   max_coeff / (base^depth * (base - 1)).  base_abs >= 2. */
Rat geometric_tail_bound(long long base_abs, long long depth, const Rat& max_coeff);

} // namespace selfaffine
