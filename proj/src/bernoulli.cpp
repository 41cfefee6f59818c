#include "padzeta/bernoulli.hpp"

#include <mutex>
#include <optional>
#include <vector>

namespace padzeta {

Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rational bernoulli_number(long k) {
    if (k < 0) throw DomainError("Bernoulli numbers need k >= 0");
    static std::mutex mu;
    static std::vector<Rational> cache{make_rational(1)};
    std::scoped_lock lock(mu);
    while (static_cast<long>(cache.size()) <= k) {
        const long m = static_cast<long>(cache.size());
        Rational s(0);
        for (long j = 0; j < m; ++j)
            s += Rational(binomial(static_cast<unsigned long>(m + 1),
                                   static_cast<unsigned long>(j))) *
                 cache[static_cast<std::size_t>(j)];
        cache.push_back(s / make_rational(-(m + 1)));
    }
    return cache[static_cast<std::size_t>(k)];
}

Rational bernoulli_poly(long k, const Rational& x) {
    if (k < 0) throw DomainError("Bernoulli polynomials need k >= 0");
    Rational acc(0);
    for (long j = 0; j <= k; ++j)
        acc = acc * x + Rational(binomial(static_cast<unsigned long>(k),
                                          static_cast<unsigned long>(j))) *
                            bernoulli_number(j);
    return acc;
}

PadicNumber generalized_bernoulli(long k, long twist, const PadicContext& ctx, long abs_prec) {
    if (k < 0) throw DomainError("generalized Bernoulli numbers need k >= 0");
    const long p = ctx.prime();
    const long pm1 = p - 1;
    const long j = ((twist % pm1) + pm1) % pm1;

    // term valuations are >= -2 (von Staudt-Clausen), so k + 2 extra
    // working digits keep abs_prec honest through the division by p
    const PadicContext wide =
        ctx.with_precision(std::max(ctx.working_prec(), abs_prec + k + 2));

    if (j == 0) return PadicNumber::from_rational(bernoulli_poly(k, Rational(1)), wide, abs_prec);

    const Rational scale = k >= 1 ? Rational(pow_integer(p, static_cast<unsigned long>(k - 1)))
                                  : make_rational(1, p);
    std::optional<PadicNumber> acc;
    for (long a = 1; a < p; ++a) {
        PadicNumber chi = pow_unit(teichmuller(Integer(a), wide, wide.working_prec()), Integer(j));
        Rational coeff = scale * bernoulli_poly(k, make_rational(a, p));
        if (coeff == 0) continue;
        PadicNumber term = mul(chi, PadicNumber::from_rational_full(coeff, wide));
        acc = acc ? add(*acc, term) : term;
    }
    if (!acc) return PadicNumber::zero(wide, abs_prec);
    return acc->with_abs_prec(abs_prec);
}

}  // namespace padzeta
