#pragma once

#include "padzeta/padic.hpp"
#include "padzeta/rational.hpp"

namespace padzeta {

Integer binomial(unsigned long n, unsigned long k);

// B_k with B_1 = -1/2, from the defining recurrence
// sum_{j=0}^{k} C(k+1, j) B_j = 0. Memoized; thread-safe.
Rational bernoulli_number(long k);

// B_k(x) = sum_{j=0}^{k} C(k, j) B_j x^(k-j).
Rational bernoulli_poly(long k, const Rational& x);

// Generalized Bernoulli number B_{k, chi} for chi = omega^twist, the
// character of conductor p sending a to omega(a)^twist:
//
//     B_{k, chi} = p^(k-1) sum_{a=1}^{p-1} chi(a) B_k(a/p)
//
// For the trivial character (twist = 0 mod p-1) the conductor-1 sum is
// used instead, i.e. B_k(1): that is B_k for k != 1 and +1/2 for k = 1.
// Result is claimed to abs_prec digits (computed in a widened context).
PadicNumber generalized_bernoulli(long k, long twist, const PadicContext& ctx, long abs_prec);

}  // namespace padzeta
