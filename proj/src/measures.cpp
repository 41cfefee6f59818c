#include "padzeta/measures.hpp"

#include <cctype>
#include <exception>
#include <thread>

#include "padzeta/bernoulli.hpp"

namespace padzeta {

ClopenBall make_ball(long p, const Integer& rep, long level) {
    if (level < 0) throw DomainError("ball level must be >= 0");
    if (rep < 0 || rep >= pow_integer(p, static_cast<unsigned long>(level)))
        throw DomainError("ball representative out of range [0, p^level)");
    return ClopenBall{level, rep};
}

std::string ball_to_string(const ClopenBall& b) {
    return b.rep.get_str() + ":" + std::to_string(b.level);
}

ClopenBall ball_from_string(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("expected rep:level", text.size());
    auto digits = [&](std::size_t from, std::size_t to) {
        if (from == to) throw ParseError("missing number in ball", from);
        for (std::size_t i = from; i < to; ++i)
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw ParseError("balls are written rep:level with nonnegative integers", i);
    };
    digits(0, colon);
    digits(colon + 1, text.size());
    ClopenBall b;
    b.rep = Integer(text.substr(0, colon), 10);
    long lvl = 0;
    try {
        lvl = std::stol(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ParseError("ball level out of range", colon + 1);
    }
    b.level = lvl;
    return b;
}

std::vector<ClopenBall> children(const ClopenBall& b, long p) {
    ClopenBall checked = make_ball(p, b.rep, b.level);
    Integer step = pow_integer(p, static_cast<unsigned long>(b.level));
    std::vector<ClopenBall> out;
    out.reserve(static_cast<std::size_t>(p));
    for (long t = 0; t < p; ++t) out.push_back(ClopenBall{b.level + 1, checked.rep + t * step});
    return out;
}

Integer scaled_representative(const Rational& x, long p, long n) {
    if (n < 0) throw DomainError("level must be >= 0");
    if (mpz_divisible_ui_p(x.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
        throw DomainError("not a p-adic integer: denominator divisible by p");
    if (n == 0) return Integer(0);
    Integer mod = pow_integer(p, static_cast<unsigned long>(n));
    Integer dinv;
    if (mpz_invert(dinv.get_mpz_t(), x.get_den().get_mpz_t(), mod.get_mpz_t()) == 0)
        throw DomainError("denominator not invertible modulo p^n");
    Integer r;
    Integer prod = x.get_num() * dinv;
    mpz_mod(r.get_mpz_t(), prod.get_mpz_t(), mod.get_mpz_t());
    return r;
}

Rational haar_value(long p, const ClopenBall& b) {
    make_ball(p, b.rep, b.level);
    return make_rational(Integer(1), pow_integer(p, static_cast<unsigned long>(b.level)));
}

Rational bernoulli_distribution_value(long p, long k, const ClopenBall& b) {
    if (k < 0) throw DomainError("E_k needs k >= 0");
    make_ball(p, b.rep, b.level);
    Rational x = make_rational(b.rep, pow_integer(p, static_cast<unsigned long>(b.level)));
    Rational val = bernoulli_poly(k, x);
    long e = b.level * (k - 1);
    if (e >= 0) return val * Rational(pow_integer(p, static_cast<unsigned long>(e)));
    return val / Rational(pow_integer(p, static_cast<unsigned long>(-e)));
}

Rational regularized_value(long p, long k, const Integer& c, const ClopenBall& b) {
    if (c == 1) throw InvalidC("c = 1 gives the zero regularization");
    if (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p)))
        throw InvalidC("c must be coprime to p");
    ClopenBall checked = make_ball(p, b.rep, b.level);
    Integer shifted = scaled_representative(make_rational(checked.rep, c), p, b.level);
    Integer ck;
    mpz_pow_ui(ck.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(k));
    return bernoulli_distribution_value(p, k, checked) -
           Rational(ck) * bernoulli_distribution_value(p, k, ClopenBall{b.level, shifted});
}

Rational alternating_value(long p, const ClopenBall& b) {
    require_odd_prime(p);
    make_ball(p, b.rep, b.level);
    return mpz_odd_p(b.rep.get_mpz_t()) ? make_rational(-1) : make_rational(1);
}

BallMeasure::BallMeasure(Kind kind, long p, long k, Integer c)
    : kind_(kind), p_(p), k_(k), c_(std::move(c)) {
    require_odd_prime(p_);
}

BallMeasure BallMeasure::haar(long p) { return BallMeasure(Kind::Haar, p, 0, Integer(0)); }

BallMeasure BallMeasure::bernoulli_family(long p, long k) {
    if (k < 0) throw DomainError("E_k needs k >= 0");
    return BallMeasure(Kind::Bernoulli, p, k, Integer(0));
}

BallMeasure BallMeasure::regularized(long p, long k, const Integer& c) {
    if (k < 0) throw DomainError("E_k needs k >= 0");
    if (c == 1) throw InvalidC("c = 1 gives the zero regularization");
    if (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p)))
        throw InvalidC("c must be coprime to p");
    return BallMeasure(Kind::Regularized, p, k, c);
}

BallMeasure BallMeasure::alternating(long p) {
    return BallMeasure(Kind::Alternating, p, 0, Integer(0));
}

Rational BallMeasure::operator()(const ClopenBall& b) const {
    switch (kind_) {
        case Kind::Haar: return haar_value(p_, b);
        case Kind::Bernoulli: return bernoulli_distribution_value(p_, k_, b);
        case Kind::Regularized: return regularized_value(p_, k_, c_, b);
        case Kind::Alternating: return alternating_value(p_, b);
    }
    throw DomainError("unreachable measure kind");
}

std::string BallMeasure::describe() const {
    switch (kind_) {
        case Kind::Haar: return "haar";
        case Kind::Bernoulli: return "E_" + std::to_string(k_);
        case Kind::Regularized: return "E_{" + std::to_string(k_) + "," + c_.get_str() + "}";
        case Kind::Alternating: return "mu";
    }
    return "?";
}

namespace {

// total balls in levels [from, to], for budget checks
long long level_range_count(long p, long from, long to, long long cap) {
    long long total = 0;
    const Integer capz(static_cast<long>(cap));
    Integer count = pow_integer(p, static_cast<unsigned long>(from));
    for (long n = from; n <= to; ++n) {
        if (count > capz) return cap + 1;
        total += count.get_si();
        if (total > cap) return cap + 1;
        count *= p;
    }
    return total;
}

}  // namespace

CheckReport additivity_check(long p, const BallValueFn& fn, long max_level,
                             long long ball_budget) {
    if (max_level < 1) throw DomainError("additivity scan needs max_level >= 1");
    if (level_range_count(p, 0, max_level, ball_budget) > ball_budget)
        throw BudgetExceeded("additivity scan through level " + std::to_string(max_level) +
                             " exceeds the ball budget");
    CheckReport report;
    for (long n = 0; n < max_level; ++n) {
        Integer balls = pow_integer(p, static_cast<unsigned long>(n));
        for (Integer a(0); a < balls; ++a) {
            ClopenBall ball{n, a};
            Rational lhs = fn(ball);
            Rational sum(0);
            for (const ClopenBall& ch : children(ball, p)) sum += fn(ch);
            ++report.balls_checked;
            if (lhs != sum) {
                report.pass = false;
                report.counterexample = BallValueMismatch{ball, lhs, sum};
                return report;
            }
        }
    }
    return report;
}

CheckReport additivity_check(const BallMeasure& m, long max_level, long long ball_budget) {
    return additivity_check(m.p(), [&m](const ClopenBall& b) { return m(b); }, max_level,
                            ball_budget);
}

std::vector<LevelBound> boundedness_scan(const BallMeasure& m, long max_level,
                                         long long ball_budget) {
    if (max_level < 0) throw DomainError("boundedness scan needs max_level >= 0");
    if (level_range_count(m.p(), 0, max_level, ball_budget) > ball_budget)
        throw BudgetExceeded("boundedness scan through level " + std::to_string(max_level) +
                             " exceeds the ball budget");
    std::vector<LevelBound> out;
    for (long n = 0; n <= max_level; ++n) {
        LevelBound lb;
        lb.level = n;
        Integer balls = pow_integer(m.p(), static_cast<unsigned long>(n));
        for (Integer a(0); a < balls; ++a) {
            Rational v = m(ClopenBall{n, a});
            auto val = valuation_rational(v, m.p());
            if (!val) continue;
            long e = -*val;  // |v|_p = p^e
            if (!lb.sup_exponent || e > *lb.sup_exponent) {
                lb.sup_exponent = e;
                lb.witness = a;
            }
        }
        out.push_back(lb);
    }
    return out;
}

CheckReport half_alternating_check(long p, const Integer& c, long max_level,
                                   long long ball_budget) {
    require_odd_prime(p);
    if (max_level < 1) throw DomainError("the scan needs max_level >= 1");
    if (c == 1) throw InvalidC("c = 1 gives the zero regularization");
    if (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p)))
        throw InvalidC("c must be coprime to p");
    if (level_range_count(p, 1, max_level, ball_budget) > ball_budget)
        throw BudgetExceeded("scan through level " + std::to_string(max_level) +
                             " exceeds the ball budget");
    CheckReport report;
    for (long n = 1; n <= max_level; ++n) {
        Integer balls = pow_integer(p, static_cast<unsigned long>(n));
        for (Integer a(0); a < balls; ++a) {
            ClopenBall ball{n, a};
            Rational lhs = regularized_value(p, 1, c, ball);
            Rational rhs = alternating_value(p, ball) / 2;
            ++report.balls_checked;
            if (lhs != rhs) {
                report.pass = false;
                report.counterexample = BallValueMismatch{ball, rhs, lhs};
                return report;
            }
        }
    }
    return report;
}

CheckReport theorem1_check(long p, long max_level, long long ball_budget) {
    return half_alternating_check(p, Integer(2), max_level, ball_budget);
}

PadicNumber riemann_integrate(const std::function<PadicNumber(const Integer&)>& f,
                              const BallMeasure& m, long level, bool units_only,
                              const PadicContext& ctx, long abs_prec, long jobs,
                              long long ball_budget) {
    if (level < 1) throw DomainError("Riemann sums need level >= 1");
    if (m.p() != ctx.prime()) throw ContextMismatch("measure and context disagree on p");
    Integer total = pow_integer(m.p(), static_cast<unsigned long>(level));
    if (total > Integer(static_cast<long>(ball_budget)))
        throw BudgetExceeded("level " + std::to_string(level) + " needs " + total.get_str() +
                             " balls, over the budget of " + std::to_string(ball_budget));
    const long long count = total.get_si();
    const long p = m.p();

    long nthreads = std::max(1L, std::min({jobs, 64L, static_cast<long>(count)}));
    std::vector<std::optional<PadicNumber>> partial(static_cast<std::size_t>(nthreads));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));

    auto work = [&](long idx) {
        try {
            // contiguous chunk [lo, hi); fixed split keeps runs reproducible
            long long lo = count * idx / nthreads;
            long long hi = count * (idx + 1) / nthreads;
            std::optional<PadicNumber> acc;
            for (long long t = lo; t < hi; ++t) {
                if (units_only && t % p == 0) continue;
                Integer rep(static_cast<long>(t));
                Rational w = m(ClopenBall{level, rep});
                if (w == 0) continue;  // an exactly-zero weight adds nothing
                PadicNumber term = mul(f(rep), PadicNumber::from_rational_full(w, ctx));
                acc = acc ? add(*acc, term) : term;
            }
            partial[static_cast<std::size_t>(idx)] = std::move(acc);
        } catch (...) {
            errors[static_cast<std::size_t>(idx)] = std::current_exception();
        }
    };

    if (nthreads == 1) {
        work(0);
    } else {
        // the Teichmuller table is built once up front so workers only read
        ctx.teichmuller_unit(Integer(1));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (long i = 0; i < nthreads; ++i) pool.emplace_back(work, i);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::optional<PadicNumber> acc;
    for (auto& part : partial) {
        if (!part) continue;
        acc = acc ? add(*acc, *part) : *part;
    }
    if (!acc) return PadicNumber::zero(ctx, abs_prec);
    return acc->with_abs_prec(abs_prec);
}

}  // namespace padzeta
