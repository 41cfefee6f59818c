#include "padzeta/rational.hpp"

#include <cctype>

namespace padzeta {

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational make_rational(long num, long den) {
    return make_rational(Integer(num), Integer(den));
}

Integer pow_integer(long p, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), e);
    return r;
}

long valuation_integer(const Integer& n, long p) {
    if (n == 0) throw DomainError("valuation of zero is not finite");
    Integer rest;
    Integer pz(p);
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

std::optional<long> valuation_rational(const Rational& q, long p) {
    if (q == 0) return std::nullopt;
    return valuation_integer(q.get_num(), p) - valuation_integer(q.get_den(), p);
}

bool is_odd_prime(long p) {
    if (p < 3 || p % 2 == 0) return false;
    Integer pz(p);
    return mpz_probab_prime_p(pz.get_mpz_t(), 40) != 0;
}

void require_odd_prime(long p) {
    if (p == 2) throw EvenPrime("p = 2 is not supported (the sign measure needs odd p)");
    if (!is_odd_prime(p)) throw DomainError("p must be an odd prime, got " + std::to_string(p));
}

std::string to_string(const Rational& q) {
    return q.get_str();
}

Rational rational_from_string(const std::string& text) {
    std::size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (begin == end) throw ParseError("empty rational", begin);

    std::string body = text.substr(begin, end - begin);
    std::size_t slash = body.find('/');
    auto parse_int = [&](const std::string& part, std::size_t at) -> Integer {
        if (part.empty()) throw ParseError("missing integer", begin + at);
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) throw ParseError("missing digits", begin + at + i);
        for (std::size_t j = i; j < part.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(part[j])))
                throw ParseError("unexpected character in rational", begin + at + j);
        return Integer(part, 10);
    };

    if (slash == std::string::npos) {
        return make_rational(parse_int(body, 0), Integer(1));
    }
    Integer num = parse_int(body.substr(0, slash), 0);
    if (slash + 1 == body.size()) throw ParseError("missing denominator", begin + slash + 1);
    Integer den = parse_int(body.substr(slash + 1), slash + 1);
    if (den == 0) throw ParseError("zero denominator", begin + slash + 1);
    return make_rational(num, den);
}

}  // namespace padzeta
