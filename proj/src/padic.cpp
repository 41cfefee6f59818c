#include "padzeta/padic.hpp"

#include <cctype>
#include <mutex>
#include <utility>
#include <vector>

namespace padzeta {

namespace {

Integer mod_reduce(const Integer& x, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

Integer invert_mod(const Integer& x, const Integer& m) {
    Integer r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
        throw NonUnit("no inverse modulo p^W");
    return r;
}

long floor_log(long n, long p) {
    long t = 0;
    while (n >= p) {
        n /= p;
        ++t;
    }
    return t;
}

long valuation_long(long n, long p) {
    long t = 0;
    while (n % p == 0) {
        n /= p;
        ++t;
    }
    return t;
}

}  // namespace

struct PadicContext::Impl {
    long p;
    long prec;
    Integer modulus;  // p^prec
    mutable std::once_flag teich_once;
    mutable std::vector<Integer> teich;  // index a in [1, p), entry omega(a) mod p^prec

    void build_teichmuller() const {
        teich.assign(static_cast<std::size_t>(p), Integer(0));
        Integer pz(p);
        for (long a = 1; a < p; ++a) {
            // x -> x^p contracts towards the root of unity congruent to a;
            // each step gains a digit, so the fixpoint arrives within prec steps.
            Integer x(a), prev;
            do {
                prev = x;
                mpz_powm(x.get_mpz_t(), x.get_mpz_t(), pz.get_mpz_t(), modulus.get_mpz_t());
            } while (x != prev);
            teich[static_cast<std::size_t>(a)] = x;
        }
    }
};

PadicContext::PadicContext(long p, long working_prec) : p_(p), prec_(working_prec) {
    require_odd_prime(p);
    if (working_prec < 1)
        throw DomainError("working precision must be >= 1, got " + std::to_string(working_prec));
    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->prec = working_prec;
    impl->modulus = pow_integer(p, static_cast<unsigned long>(working_prec));
    impl_ = std::move(impl);
}

const Integer& PadicContext::modulus() const { return impl_->modulus; }

Integer PadicContext::power_of_p(long e) const {
    if (e < 0) throw DomainError("negative power of p requested as an integer");
    return pow_integer(p_, static_cast<unsigned long>(e));
}

const Integer& PadicContext::teichmuller_unit(const Integer& a) const {
    Integer r = mod_reduce(a, Integer(p_));
    if (r == 0) throw NonUnit("Teichmuller lift of a multiple of p");
    std::call_once(impl_->teich_once, [this] { impl_->build_teichmuller(); });
    return impl_->teich[r.get_ui()];
}

PadicContext PadicContext::with_precision(long working_prec) const {
    if (working_prec == prec_) return *this;
    return PadicContext(p_, working_prec);
}

// ---------------------------------------------------------------------------

PadicNumber::PadicNumber(PadicContext ctx, bool zero, long val, Integer unit, long aprec)
    : ctx_(std::move(ctx)), zero_(zero), val_(val), unit_(std::move(unit)), aprec_(aprec) {}

PadicNumber PadicNumber::zero(const PadicContext& ctx, long abs_prec) {
    return PadicNumber(ctx, true, 0, Integer(0), abs_prec);
}

PadicNumber PadicNumber::one(const PadicContext& ctx) {
    return PadicNumber(ctx, false, 0, Integer(1), ctx.working_prec());
}

PadicNumber PadicNumber::from_unit_parts(const PadicContext& ctx, long val, Integer unit,
                                         long abs_prec) {
    const long W = ctx.working_prec();
    const long a = std::min(abs_prec, val + W);  // what the storage can honestly claim
    Integer u = mod_reduce(unit, ctx.modulus());
    if (u == 0) return zero(ctx, a);
    long t = valuation_integer(u, ctx.prime());
    if (t > 0) {
        Integer q;
        mpz_divexact(q.get_mpz_t(), u.get_mpz_t(), ctx.power_of_p(t).get_mpz_t());
        u = q;
        val += t;
    }
    if (val >= a) return zero(ctx, a);
    // canonical storage: digits above the claim carry no meaning, so they
    // are zeroed; equal claims then mean equal bits
    const long keep = a - val;
    if (keep < W) u = mod_reduce(u, ctx.power_of_p(keep));
    return PadicNumber(ctx, false, val, std::move(u), a);
}

PadicNumber PadicNumber::from_rational(const Rational& q, const PadicContext& ctx, long abs_prec) {
    if (q == 0) return zero(ctx, abs_prec);
    const long p = ctx.prime();
    long vn = (q.get_num() == 0) ? 0 : valuation_integer(q.get_num(), p);
    long vd = valuation_integer(q.get_den(), p);
    Integer num, den;
    mpz_divexact(num.get_mpz_t(), q.get_num().get_mpz_t(),
                 pow_integer(p, static_cast<unsigned long>(vn)).get_mpz_t());
    mpz_divexact(den.get_mpz_t(), q.get_den().get_mpz_t(),
                 pow_integer(p, static_cast<unsigned long>(vd)).get_mpz_t());
    Integer unit = mod_reduce(num * invert_mod(mod_reduce(den, ctx.modulus()), ctx.modulus()),
                              ctx.modulus());
    return from_unit_parts(ctx, vn - vd, std::move(unit), abs_prec);
}

PadicNumber PadicNumber::from_rational_full(const Rational& q, const PadicContext& ctx) {
    if (q == 0) return zero(ctx, ctx.working_prec());
    long v = *valuation_rational(q, ctx.prime());
    return from_rational(q, ctx, v + ctx.working_prec());
}

PadicNumber PadicNumber::from_integer(const Integer& n, const PadicContext& ctx) {
    return from_rational_full(Rational(n), ctx);
}

PadicNumber PadicNumber::from_integer(long n, const PadicContext& ctx) {
    return from_integer(Integer(n), ctx);
}

long PadicNumber::valuation() const {
    if (zero_) throw DomainError("apparent zero has no exact valuation; use valuation_lower_bound");
    return val_;
}

long PadicNumber::valuation_lower_bound() const { return zero_ ? aprec_ : val_; }

const Integer& PadicNumber::unit() const {
    if (zero_) throw DomainError("apparent zero has no unit part");
    return unit_;
}

PadicNumber PadicNumber::with_abs_prec(long a) const {
    if (a >= aprec_) return *this;
    if (zero_ || a <= val_) return zero(ctx_, a);
    return from_unit_parts(ctx_, val_, unit_, a);
}

PadicNumber PadicNumber::operator-() const {
    if (zero_) return *this;
    return from_unit_parts(ctx_, val_, ctx_.modulus() - unit_, aprec_);
}

namespace {

// Narrower working precision wins; primes must match.
const PadicContext& join_context(const PadicNumber& x, const PadicNumber& y) {
    if (x.context().prime() != y.context().prime())
        throw ContextMismatch("operands live over different primes");
    return x.context().working_prec() <= y.context().working_prec() ? x.context() : y.context();
}

}  // namespace

PadicNumber add(const PadicNumber& x, const PadicNumber& y) {
    const PadicContext& ctx = join_context(x, y);
    const long W = ctx.working_prec();
    if (x.is_zero() && y.is_zero())
        return PadicNumber::zero(ctx, std::min(x.abs_prec(), y.abs_prec()));
    if (x.is_zero())
        return PadicNumber::from_unit_parts(ctx, y.valuation(), y.unit(),
                                            std::min(x.abs_prec(), y.abs_prec()));
    if (y.is_zero())
        return PadicNumber::from_unit_parts(ctx, x.valuation(), x.unit(),
                                            std::min(x.abs_prec(), y.abs_prec()));
    const long v = std::min(x.valuation(), y.valuation());
    const long a = std::min(x.abs_prec(), y.abs_prec());
    Integer acc(0);
    const long sx = x.valuation() - v, sy = y.valuation() - v;
    if (sx < W) acc += x.unit() * ctx.power_of_p(sx);
    if (sy < W) acc += y.unit() * ctx.power_of_p(sy);
    return PadicNumber::from_unit_parts(ctx, v, std::move(acc), a);
}

PadicNumber sub(const PadicNumber& x, const PadicNumber& y) { return add(x, -y); }

PadicNumber mul(const PadicNumber& x, const PadicNumber& y) {
    const PadicContext& ctx = join_context(x, y);
    if (x.is_zero() || y.is_zero()) {
        // |xy| <= p^-(bound_x + bound_y); a zero contributes its abs_prec.
        return PadicNumber::zero(ctx, x.valuation_lower_bound() + y.valuation_lower_bound());
    }
    const long a = std::min(x.valuation() + y.abs_prec(), y.valuation() + x.abs_prec());
    return PadicNumber::from_unit_parts(ctx, x.valuation() + y.valuation(), x.unit() * y.unit(), a);
}

PadicNumber inv(const PadicNumber& x) {
    if (x.is_zero()) throw DivisionByZero("inverse of an apparent zero");
    const PadicContext& ctx = x.context();
    Integer u = invert_mod(x.unit(), ctx.modulus());
    return PadicNumber::from_unit_parts(ctx, -x.valuation(), std::move(u),
                                        x.abs_prec() - 2 * x.valuation());
}

PadicNumber pow_int(const PadicNumber& x, long e) {
    if (e == 0) return PadicNumber::one(x.context());
    if (e < 0) return pow_int(inv(x), -e);
    PadicNumber acc = PadicNumber::one(x.context());
    PadicNumber base = x;
    unsigned long bits = static_cast<unsigned long>(e);
    while (true) {
        if (bits & 1UL) acc = mul(acc, base);
        bits >>= 1UL;
        if (bits == 0) break;
        base = mul(base, base);
    }
    return acc;
}

PadicNumber pow_unit(const PadicNumber& u, const Integer& e) {
    if (u.is_zero() || u.valuation() != 0) throw NonUnit("pow_unit needs a unit");
    const PadicContext& ctx = u.context();
    Integer r;
    mpz_powm(r.get_mpz_t(), u.unit().get_mpz_t(), e.get_mpz_t(), ctx.modulus().get_mpz_t());
    return PadicNumber::from_unit_parts(ctx, 0, std::move(r), u.abs_prec());
}

bool agrees_to_precision(const PadicNumber& x, const PadicNumber& y, long m) {
    if (std::min(x.abs_prec(), y.abs_prec()) < m)
        throw PrecisionExhausted("operands carry fewer than " + std::to_string(m) +
                                 " digits; agreement cannot be decided");
    return sub(x, y).valuation_lower_bound() >= m;
}

std::optional<long> valuation_of_difference(const PadicNumber& x, const PadicNumber& y) {
    PadicNumber d = sub(x, y);
    if (d.is_zero()) return std::nullopt;
    return d.valuation();
}

PadicNumber teichmuller(const Integer& a, const PadicContext& ctx, long abs_prec) {
    PadicContext where =
        abs_prec <= ctx.working_prec() ? ctx : ctx.with_precision(abs_prec);
    return PadicNumber::from_unit_parts(where, 0, where.teichmuller_unit(a), abs_prec);
}

PadicNumber angle_part(const PadicNumber& a) {
    if (a.is_zero() || a.valuation() != 0) throw NonUnit("angle part needs a unit of Z_p");
    const PadicContext& ctx = a.context();
    const Integer& om = ctx.teichmuller_unit(a.unit());
    Integer u = mod_reduce(a.unit() * invert_mod(om, ctx.modulus()), ctx.modulus());
    return PadicNumber::from_unit_parts(ctx, 0, std::move(u), a.abs_prec());
}

// log and exp run over Z/p^(W+G) with G guard digits: X mod p^W determines
// X^n mod p^(W+(n-1)v), and (n-1)v dominates the p-part of n (resp. n!) for
// p >= 3, so the exact divisions below never eat into the W digits we keep.

PadicNumber log_unit(const PadicNumber& u) {
    const PadicContext& ctx = u.context();
    const long p = ctx.prime(), W = ctx.working_prec();
    if (u.is_zero() || u.valuation() != 0 || mod_reduce(u.unit(), Integer(p)) != 1)
        throw DomainError("log is defined on 1 + pZ_p");
    Integer X = u.unit() - 1;
    if (X == 0) return PadicNumber::zero(ctx, u.abs_prec());
    const long vx = valuation_integer(X, p);

    // keep terms n with n*vx - floor(log_p n) < W; that bound never decreases
    long T = 0;
    for (long n = 1;; ++n) {
        if (n * vx - floor_log(n, p) >= W) break;
        T = n;
    }
    if (T == 0) return PadicNumber::zero(ctx, std::min(u.abs_prec(), W));
    const long G = floor_log(T, p) + 1;
    const Integer MM = ctx.power_of_p(W + G);

    Integer Xpow(1), S(0);
    for (long n = 1; n <= T; ++n) {
        Xpow = mod_reduce(Xpow * X, MM);
        const long e = valuation_long(n, p);
        Integer t;
        if (e > 0)
            mpz_divexact(t.get_mpz_t(), Xpow.get_mpz_t(), ctx.power_of_p(e).get_mpz_t());
        else
            t = Xpow;
        long m = n;
        for (long k = 0; k < e; ++k) m /= p;
        if (m != 1) t = mod_reduce(t * invert_mod(Integer(m), MM), MM);
        if (n % 2 == 1)
            S = mod_reduce(S + t, MM);
        else
            S = mod_reduce(S - t, MM);
    }
    return PadicNumber::from_unit_parts(ctx, 0, mod_reduce(S, ctx.modulus()), u.abs_prec());
}

PadicNumber exp_small(const PadicNumber& x) {
    const PadicContext& ctx = x.context();
    const long p = ctx.prime(), W = ctx.working_prec();
    if (x.is_zero()) {
        if (x.abs_prec() < 1) throw DomainError("exp needs valuation >= 1, which is not certified");
        return PadicNumber::from_unit_parts(ctx, 0, Integer(1), x.abs_prec());
    }
    const long vx = x.valuation();
    if (vx < 1) throw DomainError("exp is defined on pZ_p");

    // v(x^n/n!) >= n*vx - (n-1)/(p-1), strictly increasing in n
    long T = 0;
    for (long n = 1;; ++n) {
        if (n * vx * (p - 1) - (n - 1) >= W * (p - 1)) break;
        T = n;
    }
    long vfactT = 0;  // v_p(T!) by Legendre
    for (long q = T / p; q > 0; q /= p) vfactT += q;
    const long G = vfactT + 1;
    const Integer MM = ctx.power_of_p(W + G);
    const Integer X = mod_reduce(x.unit() * ctx.power_of_p(vx), MM);

    Integer Xpow(1), factu(1), S(1);
    long factp = 0;
    for (long n = 1; n <= T; ++n) {
        Xpow = mod_reduce(Xpow * X, MM);
        const long e = valuation_long(n, p);
        long m = n;
        for (long k = 0; k < e; ++k) m /= p;
        factp += e;
        factu = mod_reduce(factu * m, MM);
        Integer t;
        if (factp > 0)
            mpz_divexact(t.get_mpz_t(), Xpow.get_mpz_t(), ctx.power_of_p(factp).get_mpz_t());
        else
            t = Xpow;
        t = mod_reduce(t * invert_mod(factu, MM), MM);
        S = mod_reduce(S + t, MM);
    }
    return PadicNumber::from_unit_parts(ctx, 0, mod_reduce(S, ctx.modulus()), x.abs_prec());
}

PadicNumber pow_padic(const PadicNumber& u, const PadicNumber& s) {
    if (u.is_zero() || u.valuation() != 0 ||
        mod_reduce(u.unit(), Integer(u.context().prime())) != 1)
        throw DomainError("pow_padic needs a base in 1 + pZ_p");
    if (!s.is_zero() && s.valuation() < 0)
        throw DomainError("pow_padic needs an exponent in Z_p");
    if (s.is_zero() && s.abs_prec() < 0)
        throw DomainError("pow_padic exponent is not certified to lie in Z_p");
    return exp_small(mul(s, log_unit(u)));
}

PadicNumber pow_padic(const PadicNumber& u, const Rational& s) {
    return pow_padic(u, PadicNumber::from_rational_full(s, u.context()));
}

// ---------------------------------------------------------------------------
// text form

namespace {

std::string p_power_token(long p, long e) {
    if (e == 1) return std::to_string(p);
    return std::to_string(p) + "^" + std::to_string(e);
}

}  // namespace

std::string render(const PadicNumber& x) {
    const long p = x.context().prime();
    if (x.is_zero()) return "O(" + p_power_token(p, x.abs_prec()) + ")";
    const long v = x.valuation();
    const long start = std::min(v, 0L);
    Integer u = x.unit();
    std::string out;
    for (long e = start; e < x.abs_prec(); ++e) {
        long d = 0;
        if (e >= v) {
            Integer digit = mod_reduce(u, Integer(p));
            d = static_cast<long>(digit.get_ui());
            u = (u - digit) / p;
        }
        if (!out.empty()) out += " + ";
        out += std::to_string(d);
        if (e != 0) out += "*" + p_power_token(p, e);
    }
    out += (out.empty() ? "" : " + ");
    out += "O(" + p_power_token(p, x.abs_prec()) + ")";
    return out;
}

PadicNumber parse(const std::string& text, const PadicContext& ctx) {
    const long p = ctx.prime();
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto skip_ws = [&] {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto is_digit = [&](std::size_t k) {
        return k < n && std::isdigit(static_cast<unsigned char>(text[k]));
    };
    auto parse_uint = [&]() -> Integer {
        if (!is_digit(i)) throw ParseError("expected a digit", i);
        Integer v(0);
        while (is_digit(i)) {
            v = v * 10 + (text[i] - '0');
            ++i;
        }
        return v;
    };
    auto parse_exponent = [&]() -> long {
        long sign = 1;
        if (i < n && (text[i] == '-' || text[i] == '+')) {
            if (text[i] == '-') sign = -1;
            ++i;
        }
        std::size_t at = i;
        Integer v = parse_uint();
        if (v > 1000000) throw ParseError("exponent out of range", at);
        return sign * static_cast<long>(v.get_ui());
    };

    std::vector<std::pair<long, Integer>> digits;  // (exponent, digit)
    bool saw_prec = false;
    long aprec = 0;
    long last_exp = 0;
    bool have_last = false;

    skip_ws();
    if (i >= n) throw ParseError("empty input", i);
    while (true) {
        skip_ws();
        std::size_t term_at = i;
        if (i < n && text[i] == 'O') {
            ++i;
            skip_ws();
            if (i >= n || text[i] != '(') throw ParseError("expected '(' after O", i);
            ++i;
            skip_ws();
            std::size_t base_at = i;
            Integer base = parse_uint();
            if (base != p) throw ParseError("wrong prime in precision term", base_at);
            skip_ws();
            if (i < n && text[i] == '^') {
                ++i;
                skip_ws();
                aprec = parse_exponent();
            } else {
                aprec = 1;
            }
            skip_ws();
            if (i >= n || text[i] != ')') throw ParseError("expected ')'", i);
            ++i;
            skip_ws();
            if (i != n) throw ParseError("trailing input after precision term", i);
            saw_prec = true;
            break;
        }

        Integer d = parse_uint();
        if (d >= p) throw ParseError("digit out of range for p = " + std::to_string(p), term_at);
        long exp = 0;
        skip_ws();
        if (i < n && text[i] == '*') {
            ++i;
            skip_ws();
            std::size_t base_at = i;
            Integer base = parse_uint();
            if (base != p) throw ParseError("wrong prime in term", base_at);
            skip_ws();
            if (i < n && text[i] == '^') {
                ++i;
                skip_ws();
                exp = parse_exponent();
            } else {
                exp = 1;
            }
        }
        if (have_last && exp <= last_exp)
            throw ParseError("term exponents must be strictly increasing", term_at);
        last_exp = exp;
        have_last = true;
        digits.emplace_back(exp, d);

        skip_ws();
        if (i < n && text[i] == '+') {
            ++i;
            continue;
        }
        throw ParseError("missing precision term O(p^N)", i);
    }
    if (!saw_prec) throw ParseError("missing precision term O(p^N)", i);
    if (have_last && last_exp >= aprec)
        throw ParseError("digit at or beyond the stated precision", 0);

    long v = 0;
    bool found = false;
    for (const auto& [e, d] : digits)
        if (d != 0 && !found) {
            v = e;
            found = true;
        }
    if (!found) return PadicNumber::zero(ctx, aprec);
    Integer unit(0);
    for (const auto& [e, d] : digits)
        if (d != 0) unit += d * ctx.power_of_p(e - v);
    return PadicNumber::from_unit_parts(ctx, v, std::move(unit), aprec);
}

}  // namespace padzeta
