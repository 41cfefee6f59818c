#pragma once

#include <optional>
#include <vector>

#include "padzeta/measures.hpp"
#include "padzeta/padic.hpp"

namespace padzeta {

// The p-1 branches of the p-adic zeta function, indexed by i in
// [0, p-2]: branch i is L_p(s, omega^(1-i)), obtained from the series
//
//   S_n(s) = sum_{a=1, p∤a}^{p^n} ((-1)^a / 2) omega(a)^(-i) <a>^(-s)
//
// (the level-n Riemann sum of the integrand against E_{1,2}) times the
// regularization prefactor -1 / (1 - omega(2)^(1-i) <2>^(1-s)).
// Consecutive sums satisfy v_p(S_{n+1} - S_n) >= n, so levels buy digits.
//
// s may be any rational in Z_p (denominator coprime to p); integer s uses
// exact modular exponentiation, other s go through exp/log.

inline constexpr long long kDefaultTermBudget = 10000000;

// S_n at level >= 1. The sum is exact modulo p^W for the context chosen
// internally (W = abs_prec + 4 guard digits), and the result claims that
// full W. jobs > 1 evaluates chunks in parallel, bit-identically.
PadicNumber partial_sum(long p, long i, const Rational& s, long level, long abs_prec,
                        long jobs = 1, long long term_budget = kDefaultTermBudget);

// -1 / (1 - omega(2)^(1-i) <2>^(1-s)). Throws PoleAtOne when the
// denominator vanishes to working precision (the pole branch at s = 1).
PadicNumber euler_prefactor(long p, long i, const Rational& s, long abs_prec);

struct LSeriesResult {
    PadicNumber value;
    long level_used = 0;
    // increments[m] = v_p(S_{m+2} - S_{m+1}), i.e. the gain from level
    // m+1 to m+2; nullopt when the difference vanished to working precision
    std::vector<std::optional<long>> increments;
};

// Adaptive evaluation: levels grow until an increment reaches abs_prec
// (claim = min(abs_prec, achieved)) or the term budget would be exceeded.
LSeriesResult lp_value(long p, long i, const Rational& s, long abs_prec, long jobs = 1,
                       long long term_budget = kDefaultTermBudget);
// Fixed-level evaluation (all sums up to the level are computed so the
// increment profile is still reported).
LSeriesResult lp_value_at_level(long p, long i, const Rational& s, long level, long abs_prec,
                                long jobs = 1, long long term_budget = kDefaultTermBudget);

// v_p(S_{n+1} - S_n) for n = 1..n_max-1 at the given point.
std::vector<std::optional<long>> convergence_profile(long p, long i, const Rational& s,
                                                     long n_max, long abs_prec, long jobs = 1,
                                                     long long term_budget = kDefaultTermBudget);

// The interpolation target at s = 1-k on branch i: with the twist
// tau = omega^(1-i-k),
//
//   -(1 - tau_triv p^(k-1)) B_{k,tau} / k
//
// where tau_triv is 1 for the trivial twist and 0 otherwise (tau(p) = 0
// for a nontrivial character of conductor p).
PadicNumber interpolation_rhs(long p, long i, long k, const PadicContext& ctx, long abs_prec);

struct InterpolationReport {
    bool pass = false;
    long required = 0;  // digits of agreement demanded: min(abs_prec, level-1)
    std::optional<long> achieved;  // v_p(lhs - rhs), nullopt if no difference visible
    PadicNumber lhs;
    PadicNumber rhs;
};

// Compares L_p(1-k, omega^(1-i)) computed from the level-n series with
// the Bernoulli target above.
InterpolationReport verify_interpolation(long p, long i, long k, long level, long abs_prec,
                                         long jobs = 1,
                                         long long term_budget = kDefaultTermBudget);

// General Mellin transform against E_{1,c}: for chi = omega^j,
//
//   -1/(1 - chi(c)<c>^(1-s)) * sum_{a unit mod p^n} chi omega^(-1)(a) <a>^(-s) E_{1,c}(ball)
//
// With c = 2 and j = 1-i this reproduces the branch series term by term.
PadicNumber mellin_lp(long p, long j, const Rational& s, const Integer& c, long level,
                      long abs_prec, long jobs = 1, long long term_budget = kDefaultTermBudget);

// Estimates the residue at s = 1 on a branch whose prefactor denominator
// vanishes there, as -I_n / log<2> with I_n the level-n Riemann sum of
// omega(a)^(1-i) a^-1 against E_{1,2}. On the trivial-character branch
// i = 1 this converges to 1 - 1/p; on further degenerate branches (p = 7,
// i = 4) the numerator vanishes too and the estimate is 0: the apparent
// pole is removable. Refuses (DomainError) on branches with no pole.
PadicNumber residue_estimate_branch(long p, long i, long level, long abs_prec, long jobs = 1,
                                    long long term_budget = kDefaultTermBudget);
// The pole branch i = 1 (trivial character).
PadicNumber residue_estimate(long p, long level, long abs_prec, long jobs = 1,
                             long long term_budget = kDefaultTermBudget);

// True iff the branch's prefactor denominator vanishes at s = 1, i.e.
// omega(2)^(1-i) = 1. With c = 2 this is the trivial-character branch
// i = 1 mod (p-1) exactly when 2 generates (Z/p)^*; primes where
// ord_p(2) is smaller (p = 7: ord(2) = 3) degenerate further branches.
bool branch_has_pole(long p, long i);

}  // namespace padzeta
