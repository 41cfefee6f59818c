#pragma once

#include <memory>
#include <optional>
#include <string>

#include "padzeta/rational.hpp"

namespace padzeta {

// Shared, immutable description of where p-adic arithmetic happens:
// the odd prime p and the working precision W (units are stored modulo
// p^W). Cheap to copy; the Teichmuller table omega(1..p-1) mod p^W is
// built lazily, once, and is safe to read from many threads.
class PadicContext {
public:
    PadicContext(long p, long working_prec);

    long prime() const { return p_; }
    long working_prec() const { return prec_; }
    const Integer& modulus() const;        // p^W
    Integer power_of_p(long e) const;      // p^e, e >= 0

    // omega(a) mod p^W for a in [1, p); a is reduced mod p first.
    // Throws NonUnit when p | a.
    const Integer& teichmuller_unit(const Integer& a) const;

    PadicContext with_precision(long working_prec) const;

    // Same prime and same working precision.
    friend bool operator==(const PadicContext& x, const PadicContext& y) {
        return x.p_ == y.p_ && x.prec_ == y.prec_;
    }

private:
    struct Impl;
    long p_;
    long prec_;
    std::shared_ptr<const Impl> impl_;
};

// A p-adic number carried at finite precision.
//
// A nonzero value is p^val * unit with the unit stored modulo p^W,
// coprime to p, in [1, p^W). abs_prec is the guarantee: the true value
// is congruent to the stored one modulo p^abs_prec. Digits the storage
// happens to contain above abs_prec mean nothing. Invariants:
//
//     nonzero:        val < abs_prec <= val + W
//     apparent zero:  the value is 0 modulo p^abs_prec; no nonzero
//                     digit is known, valuation is only bounded below.
//
// Precision flows through arithmetic the usual ultrametric way:
//     add/sub:  abs = min(abs_x, abs_y)
//     mul:      abs = min(val_x + abs_y, val_y + abs_x)
//     inv:      abs = abs_x - 2 val_x       (relative precision kept)
// Operands must share the prime; with different working precisions the
// result lives at the narrower W.
class PadicNumber {
public:
    // Value known modulo p^abs_prec (claim clamped to what the storage
    // can honestly hold, i.e. at most val + W).
    static PadicNumber from_rational(const Rational& q, const PadicContext& ctx, long abs_prec);
    // Full precision for an exact input: abs_prec = val + W.
    static PadicNumber from_rational_full(const Rational& q, const PadicContext& ctx);
    static PadicNumber from_integer(const Integer& n, const PadicContext& ctx);
    static PadicNumber from_integer(long n, const PadicContext& ctx);
    static PadicNumber zero(const PadicContext& ctx, long abs_prec);
    static PadicNumber one(const PadicContext& ctx);
    // Normalizing constructor: reduces unit mod p^W, strips p factors
    // into the valuation, collapses to apparent zero when nothing is
    // visible below abs_prec.
    static PadicNumber from_unit_parts(const PadicContext& ctx, long val, Integer unit,
                                       long abs_prec);

    const PadicContext& context() const { return ctx_; }
    bool is_zero() const { return zero_; }          // zero to its precision
    long valuation() const;                         // throws DomainError on apparent zero
    long valuation_lower_bound() const;             // = abs_prec for apparent zero
    const Integer& unit() const;                    // throws DomainError on apparent zero
    long abs_prec() const { return aprec_; }

    // Same value, claim lowered to min(abs_prec, a). Never raises a claim.
    PadicNumber with_abs_prec(long a) const;

    PadicNumber operator-() const;

private:
    PadicNumber(PadicContext ctx, bool zero, long val, Integer unit, long aprec);
    PadicContext ctx_;
    bool zero_;
    long val_;
    Integer unit_;
    long aprec_;
};

PadicNumber add(const PadicNumber& x, const PadicNumber& y);
PadicNumber sub(const PadicNumber& x, const PadicNumber& y);
PadicNumber mul(const PadicNumber& x, const PadicNumber& y);
// Throws DivisionByZero on an apparent zero.
PadicNumber inv(const PadicNumber& x);
// x^e by repeated squaring (e < 0 inverts first); e = 0 gives exact 1.
PadicNumber pow_int(const PadicNumber& x, long e);
// u^e for a unit u and arbitrary integer e, by modular exponentiation.
PadicNumber pow_unit(const PadicNumber& u, const Integer& e);

inline PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) { return add(x, y); }
inline PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return sub(x, y); }
inline PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) { return mul(x, y); }

// True iff v_p(x - y) >= m is guaranteed. Throws PrecisionExhausted when
// the operands do not carry m digits to compare.
bool agrees_to_precision(const PadicNumber& x, const PadicNumber& y, long m);

// Valuation of the visible difference, nullopt when x - y is an apparent
// zero (difference vanishes to the full shared precision).
std::optional<long> valuation_of_difference(const PadicNumber& x, const PadicNumber& y);

// Teichmuller lift of the residue of a, at absolute precision abs_prec
// (the context is widened internally when abs_prec > W). Throws NonUnit
// when p | a.
PadicNumber teichmuller(const Integer& a, const PadicContext& ctx, long abs_prec);

// <a> = a / omega(a) in 1 + pZ_p, for a unit a (val = 0).
PadicNumber angle_part(const PadicNumber& a);

// log on 1 + pZ_p; exact on valuations: v(log u) = v(u - 1).
PadicNumber log_unit(const PadicNumber& u);

// exp on pZ_p (argument must have valuation >= 1).
PadicNumber exp_small(const PadicNumber& x);

// u^s = exp(s log u) for u in 1 + pZ_p and s in Z_p.
PadicNumber pow_padic(const PadicNumber& u, const PadicNumber& s);
PadicNumber pow_padic(const PadicNumber& u, const Rational& s);

// Digit expansion "d0 + d1*p + d2*p^2 + ... + O(p^N)"; zero digits are
// kept, negative valuations show as "d*p^-k", an apparent zero is just
// "O(p^N)".
std::string render(const PadicNumber& x);

// Left inverse of render (for the same context). Throws ParseError with
// the offending position.
PadicNumber parse(const std::string& text, const PadicContext& ctx);

}  // namespace padzeta
