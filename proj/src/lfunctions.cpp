#include "padzeta/lfunctions.hpp"

#include <algorithm>

#include "padzeta/bernoulli.hpp"

namespace padzeta {

namespace {

Integer mod_nonneg(const Integer& x, long m) {
    Integer r, mz(m);
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), mz.get_mpz_t());
    return r;
}

void validate_branch(long p, long i) {
    require_odd_prime(p);
    if (i < 0 || i > p - 2)
        throw DomainError("branch index must lie in [0, p-2], got " + std::to_string(i));
}

void validate_s(long p, const Rational& s) {
    if (mpz_divisible_ui_p(s.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
        throw DomainError("s must lie in Z_p: denominator is divisible by p");
}

// omega(a)^(-i) <a>^(-s) as a function of the unit representative a.
// Integer s collapses to pure modular exponentiation (exact mod p^W);
// other s go through exp(-s log <a>).
struct BranchIntegrand {
    PadicContext ctx;
    long p;
    long i;
    bool int_s;
    Integer t;                         // s itself when integral
    std::vector<Integer> chi_pow;      // a0 -> omega(a0)^((t-i) mod (p-1))
    std::optional<PadicNumber> neg_s;  // embedded -s otherwise

    BranchIntegrand(long p_, long i_, const Rational& s, long working_prec)
        : ctx(p_, working_prec), p(p_), i(i_), int_s(s.get_den() == 1), t(s.get_num()) {
        if (int_s) {
            // omega(a)^(-i) <a>^(-t) = omega(a)^(t-i) a^(-t)
            Integer e = mod_nonneg(t - i, p - 1);
            chi_pow.assign(static_cast<std::size_t>(p), Integer(0));
            for (long a = 1; a < p; ++a) {
                Integer r;
                mpz_powm(r.get_mpz_t(), ctx.teichmuller_unit(Integer(a)).get_mpz_t(),
                         e.get_mpz_t(), ctx.modulus().get_mpz_t());
                chi_pow[static_cast<std::size_t>(a)] = r;
            }
        } else {
            neg_s = PadicNumber::from_rational_full(-Rational(s), ctx);
        }
    }

    PadicNumber operator()(const Integer& a) const {
        if (int_s) {
            Integer apow, me = -t;
            Integer base = a % ctx.modulus();
            mpz_powm(apow.get_mpz_t(), base.get_mpz_t(), me.get_mpz_t(),
                     ctx.modulus().get_mpz_t());
            const Integer& chi = chi_pow[mod_nonneg(a, p).get_ui()];
            return PadicNumber::from_unit_parts(ctx, 0, chi * apow, ctx.working_prec());
        }
        PadicNumber om = pow_unit(teichmuller(a, ctx, ctx.working_prec()), Integer(-i));
        PadicNumber ang = angle_part(PadicNumber::from_integer(a, ctx));
        return mul(om, exp_small(mul(*neg_s, log_unit(ang))));
    }
};

// -1 / (1 - omega(c)^j <c>^(1-s)); throws PoleAtOne when the denominator
// vanishes to working precision.
PadicNumber regularization_prefactor(const PadicContext& ctx, long j, const Integer& c,
                                     const Rational& s) {
    const long p = ctx.prime();
    PadicNumber cval = PadicNumber::from_integer(c, ctx);
    PadicNumber chi_c = pow_unit(teichmuller(c, ctx, ctx.working_prec()),
                                 mod_nonneg(Integer(j), p - 1));
    PadicNumber ang_c = angle_part(cval);
    Rational e = 1 - s;
    PadicNumber apow =
        e.get_den() == 1 ? pow_unit(ang_c, Integer(e.get_num())) : pow_padic(ang_c, e);
    PadicNumber den = sub(PadicNumber::one(ctx), mul(chi_c, apow));
    if (den.is_zero()) throw PoleAtOne("pole at s=1");
    return -inv(den);
}

long guarded_prec(long abs_prec) {
    if (abs_prec < 1) throw DomainError("requested precision must be >= 1");
    return abs_prec + 4;
}

PadicNumber series_sum(const BranchIntegrand& f, const BallMeasure& m, long level, long jobs,
                       long long term_budget) {
    return riemann_integrate([&f](const Integer& a) { return f(a); }, m, level, true, f.ctx,
                             f.ctx.working_prec(), jobs, term_budget);
}

}  // namespace

bool branch_has_pole(long p, long i) {
    validate_branch(p, i);
    // omega(2)^(1-i) is a (p-1)-st root of unity, so it is 1 exactly when
    // its residue 2^(1-i) mod p is
    Integer e = mod_nonneg(Integer(1 - i), p - 1);
    Integer r, two(2), pz(p);
    mpz_powm(r.get_mpz_t(), two.get_mpz_t(), e.get_mpz_t(), pz.get_mpz_t());
    return r == 1;
}

PadicNumber partial_sum(long p, long i, const Rational& s, long level, long abs_prec, long jobs,
                        long long term_budget) {
    validate_branch(p, i);
    validate_s(p, s);
    if (level < 1) throw DomainError("partial sums need level >= 1");
    BranchIntegrand f(p, i, s, guarded_prec(abs_prec));
    return series_sum(f, BallMeasure::regularized(p, 1, Integer(2)), level, jobs, term_budget);
}

PadicNumber euler_prefactor(long p, long i, const Rational& s, long abs_prec) {
    validate_branch(p, i);
    validate_s(p, s);
    PadicContext ctx(p, guarded_prec(abs_prec));
    return regularization_prefactor(ctx, 1 - i, Integer(2), s);
}

namespace {

LSeriesResult lp_eval(long p, long i, const Rational& s, long abs_prec, long jobs,
                      long long term_budget, std::optional<long> fixed_level) {
    validate_branch(p, i);
    validate_s(p, s);
    const long W = guarded_prec(abs_prec);
    BranchIntegrand f(p, i, s, W);
    // fail fast on the pole before any series work
    PadicNumber pref = regularization_prefactor(f.ctx, 1 - i, Integer(2), s);
    BallMeasure m = BallMeasure::regularized(p, 1, Integer(2));

    std::vector<std::optional<long>> increments;
    const Integer budget(static_cast<long>(term_budget));

    auto within_budget = [&](long n) {
        return pow_integer(p, static_cast<unsigned long>(n)) <= budget;
    };
    if (!within_budget(fixed_level ? *fixed_level : 2))
        throw BudgetExceeded("term budget " + std::to_string(term_budget) +
                             " does not cover level " +
                             std::to_string(fixed_level ? *fixed_level : 2));

    PadicNumber prev = series_sum(f, m, 1, jobs, term_budget);
    PadicNumber best = prev;
    long level = 1;
    long claim_level = level;
    while (true) {
        if (fixed_level && level >= *fixed_level) break;
        if (!fixed_level && !within_budget(level + 1))
            throw BudgetExceeded("adaptive evaluation stopped by the term budget of " +
                                 std::to_string(term_budget) + " before level " +
                                 std::to_string(level + 1) + "; best level reached is " +
                                 std::to_string(level));
        PadicNumber cur = series_sum(f, m, level + 1, jobs, term_budget);
        ++level;
        std::optional<long> inc = valuation_of_difference(cur, prev);
        increments.push_back(inc);
        best = cur;
        long achieved = inc ? *inc : std::min(cur.abs_prec(), prev.abs_prec());
        prev = cur;
        claim_level = level;
        if (!fixed_level && achieved >= abs_prec) {
            // adaptive stop: the claim follows the observed stabilization
            claim_level = achieved;
            break;
        }
    }

    // fixed-level sums approximate the limit to the level reached (rate
    // theorem); the requested precision caps the final claim either way
    PadicNumber value =
        mul(pref, best.with_abs_prec(std::min<long>(best.abs_prec(), claim_level)))
            .with_abs_prec(abs_prec);
    return LSeriesResult{value, level, std::move(increments)};
}

}  // namespace

LSeriesResult lp_value(long p, long i, const Rational& s, long abs_prec, long jobs,
                       long long term_budget) {
    return lp_eval(p, i, s, abs_prec, jobs, term_budget, std::nullopt);
}

LSeriesResult lp_value_at_level(long p, long i, const Rational& s, long level, long abs_prec,
                                long jobs, long long term_budget) {
    if (level < 1) throw DomainError("evaluation level must be >= 1");
    return lp_eval(p, i, s, abs_prec, jobs, term_budget, level);
}

std::vector<std::optional<long>> convergence_profile(long p, long i, const Rational& s,
                                                     long n_max, long abs_prec, long jobs,
                                                     long long term_budget) {
    if (n_max < 2) throw DomainError("a convergence profile needs n_max >= 2");
    LSeriesResult r = lp_value_at_level(p, i, s, n_max, abs_prec, jobs, term_budget);
    return std::move(r.increments);
}

PadicNumber interpolation_rhs(long p, long i, long k, const PadicContext& ctx, long abs_prec) {
    validate_branch(p, i);
    if (k < 1) throw DomainError("interpolation needs k >= 1");
    const long pm1 = p - 1;
    const long twist = ((1 - i - k) % pm1 + pm1) % pm1;
    PadicNumber b = generalized_bernoulli(k, twist, ctx, abs_prec + 2);
    Rational factor(1);
    if (twist == 0) {
        // trivial twist keeps its Euler factor at p
        factor = 1 - Rational(pow_integer(p, static_cast<unsigned long>(k - 1)));
    }
    Rational scale = -factor / Rational(k);
    return mul(b, PadicNumber::from_rational_full(scale, b.context())).with_abs_prec(abs_prec);
}

InterpolationReport verify_interpolation(long p, long i, long k, long level, long abs_prec,
                                         long jobs, long long term_budget) {
    if (k < 1) throw DomainError("interpolation needs k >= 1");
    if (level < 2) throw DomainError("interpolation checks need level >= 2");
    const Rational s = make_rational(1 - k);
    // the prefactor's valuation decides how many digits the level bound
    // can transfer to the value (it is negative on trivial-twist branches)
    PadicNumber pref = euler_prefactor(p, i, s, abs_prec + 2);
    const long vp = pref.valuation();
    const long extra = vp < 0 ? -vp : 0;

    LSeriesResult lr = lp_value_at_level(p, i, s, level, abs_prec + 1 + extra, jobs, term_budget);
    PadicNumber rhs = interpolation_rhs(p, i, k, lr.value.context(), abs_prec + 1);
    const long required = std::min({abs_prec, level - 1, level + vp});

    InterpolationReport report{false, required, valuation_of_difference(lr.value, rhs),
                               lr.value, rhs};
    report.pass = agrees_to_precision(lr.value, rhs, required);
    return report;
}

PadicNumber mellin_lp(long p, long j, const Rational& s, const Integer& c, long level,
                      long abs_prec, long jobs, long long term_budget) {
    require_odd_prime(p);
    validate_s(p, s);
    if (level < 1) throw DomainError("evaluation level must be >= 1");
    const long pm1 = p - 1;
    const long i = ((1 - j) % pm1 + pm1) % pm1;  // omega^(j-1) = omega^(-i)
    BallMeasure m = BallMeasure::regularized(p, 1, c);  // validates c up front
    BranchIntegrand f(p, i, s, guarded_prec(abs_prec));
    PadicNumber pref = regularization_prefactor(f.ctx, j, c, s);
    PadicNumber sum = series_sum(f, m, level, jobs, term_budget);
    return mul(pref, sum.with_abs_prec(std::min<long>(sum.abs_prec(), level)))
        .with_abs_prec(abs_prec);
}

PadicNumber residue_estimate_branch(long p, long i, long level, long abs_prec, long jobs,
                                    long long term_budget) {
    validate_branch(p, i);
    if (level < 1) throw DomainError("residue estimates need level >= 1");
    if (!branch_has_pole(p, i))
        throw DomainError("branch " + std::to_string(i) +
                          " has no pole at s=1: the regularization denominator is a unit there");
    PadicContext ctx(p, guarded_prec(abs_prec));
    // the series integrand at s = 1 is omega(a)^(1-i) a^(-1); the twist
    // only drops out on the trivial-character branch
    const Integer e = mod_nonneg(Integer(1 - i), p - 1);
    auto f = [&ctx, &e](const Integer& a) {
        return mul(pow_unit(teichmuller(a, ctx, ctx.working_prec()), e),
                   inv(PadicNumber::from_integer(a, ctx)));
    };
    PadicNumber I = riemann_integrate(f, BallMeasure::regularized(p, 1, Integer(2)), level, true,
                                      ctx, std::min<long>(ctx.working_prec(), level), jobs,
                                      term_budget);
    PadicNumber log2 = log_unit(angle_part(PadicNumber::from_integer(2, ctx)));
    return (-mul(I, inv(log2))).with_abs_prec(abs_prec);
}

PadicNumber residue_estimate(long p, long level, long abs_prec, long jobs,
                             long long term_budget) {
    // the trivial character lives on branch i = 1, which always has the pole
    return residue_estimate_branch(p, 1, level, abs_prec, jobs, term_budget);
}

}  // namespace padzeta
