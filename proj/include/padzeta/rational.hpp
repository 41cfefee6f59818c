#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "padzeta/errors.hpp"

namespace padzeta {

// Exact arithmetic is delegated to GMP. mpq_class keeps every value in
// canonical form (coprime parts, positive denominator) through arithmetic;
// the helpers below add the constructors, p-adic valuations and the
// "num/den" text form the rest of the library expects.
using Integer = mpz_class;
using Rational = mpq_class;

// num/den with canonicalization; throws DivisionByZero when den = 0.
Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den = 1);

// p^e for e >= 0.
Integer pow_integer(long p, unsigned long e);

// v_p(n) for n != 0; throws DomainError on n = 0.
long valuation_integer(const Integer& n, long p);

// v_p(q), or nullopt for q = 0 (valuation +infinity).
std::optional<long> valuation_rational(const Rational& q, long p);

bool is_odd_prime(long p);
// Throws DomainError (p < 2 or composite) or EvenPrime (p = 2).
void require_odd_prime(long p);

// "num/den", or just "num" for integers.
std::string to_string(const Rational& q);

// Inverse of to_string; accepts optional leading '-' and surrounding
// spaces. Throws ParseError.
Rational rational_from_string(const std::string& text);

}  // namespace padzeta
