#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "padzeta/padic.hpp"

namespace padzeta {

// The clopen ball rep + p^level Z_p, with 0 <= rep < p^level.
struct ClopenBall {
    long level = 0;
    Integer rep{0};
};

// Validates the representative range for the given prime.
ClopenBall make_ball(long p, const Integer& rep, long level);
// "A:N" (representative, colon, level).
std::string ball_to_string(const ClopenBall& b);
ClopenBall ball_from_string(const std::string& text);
// The p balls rep + t p^level + p^(level+1) Z_p partitioning b.
std::vector<ClopenBall> children(const ClopenBall& b, long p);

// {x}_{p^n}: the integer representative in [0, p^n) of a p-integral
// rational. Throws DomainError when p divides the denominator.
Integer scaled_representative(const Rational& x, long p, long n);

// The distribution families, as exact rationals on balls:
//   haar:        p^-n
//   E_k:         p^(n(k-1)) B_k(rep / p^n)
//   E_{k,c}:     E_k(ball) - c^k E_k(ball / c)     (c != 1, p does not divide c)
//   mu:          (-1)^rep                          (odd p only)
Rational haar_value(long p, const ClopenBall& b);
Rational bernoulli_distribution_value(long p, long k, const ClopenBall& b);
Rational regularized_value(long p, long k, const Integer& c, const ClopenBall& b);
Rational alternating_value(long p, const ClopenBall& b);

class BallMeasure {
public:
    enum class Kind { Haar, Bernoulli, Regularized, Alternating };

    static BallMeasure haar(long p);
    static BallMeasure bernoulli_family(long p, long k);
    static BallMeasure regularized(long p, long k, const Integer& c);
    static BallMeasure alternating(long p);

    Kind kind() const { return kind_; }
    long p() const { return p_; }
    long k() const { return k_; }
    const Integer& c() const { return c_; }

    Rational operator()(const ClopenBall& b) const;
    std::string describe() const;

private:
    BallMeasure(Kind kind, long p, long k, Integer c);
    Kind kind_;
    long p_;
    long k_;
    Integer c_;
};

inline constexpr long long kDefaultBallBudget = 2000000;

struct BallValueMismatch {
    ClopenBall ball;
    Rational expected;
    Rational actual;
};

struct CheckReport {
    bool pass = true;
    long long balls_checked = 0;
    std::optional<BallValueMismatch> counterexample;
};

using BallValueFn = std::function<Rational(const ClopenBall&)>;

// Finite additivity: value(ball) = sum over the p children, for every
// ball of level < max_level. Stops at the first counterexample.
CheckReport additivity_check(long p, const BallValueFn& fn, long max_level,
                             long long ball_budget = kDefaultBallBudget);
CheckReport additivity_check(const BallMeasure& m, long max_level,
                             long long ball_budget = kDefaultBallBudget);

struct LevelBound {
    long level = 0;
    // max |value|_p over the level's balls is p^sup_exponent;
    // nullopt when every value at the level is 0.
    std::optional<long> sup_exponent;
    Integer witness{0};  // first representative attaining the max
};

std::vector<LevelBound> boundedness_scan(const BallMeasure& m, long max_level,
                                         long long ball_budget = kDefaultBallBudget);

// E_{1,c} versus half the sign measure on every ball of level 1..max_level;
// balls_checked reproduces the sum of p^n over those levels. The identity
// holds for c = 2; other c serve as the negative control.
CheckReport half_alternating_check(long p, const Integer& c, long max_level,
                                   long long ball_budget = kDefaultBallBudget);
CheckReport theorem1_check(long p, long max_level,
                           long long ball_budget = kDefaultBallBudget);

// Level-n Riemann sum  sum_a f(a) m(a + p^n Z_p)  over all representatives
// (or only those coprime to p). f sees the ball representative; terms are
// combined exactly, so the jobs > 1 chunked evaluation is bit-identical to
// the serial one.
PadicNumber riemann_integrate(const std::function<PadicNumber(const Integer&)>& f,
                              const BallMeasure& m, long level, bool units_only,
                              const PadicContext& ctx, long abs_prec, long jobs = 1,
                              long long ball_budget = kDefaultBallBudget);

}  // namespace padzeta
