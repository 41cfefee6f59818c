#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace padzeta {

// Root of every arithmetic/domain failure the library raises on purpose.
// The CLI maps these to exit code 2; malformed command lines get 1 and
// failed verifications 3.
struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A comparison or claim was requested beyond the precision actually carried.
struct PrecisionExhausted : MathError {
    using MathError::MathError;
};

// Inversion (or division) of an apparent zero.
struct DivisionByZero : MathError {
    using MathError::MathError;
};

// A unit of Z_p was required (Teichmuller lift, angle part, integrand a^-1).
struct NonUnit : MathError {
    using MathError::MathError;
};

// Argument outside the mathematical domain of the operation.
struct DomainError : MathError {
    using MathError::MathError;
};

// Regularization parameter c rejected: c = 1 or p | c.
struct InvalidC : MathError {
    using MathError::MathError;
};

// The sign measure needs (-1)^p = -1; p = 2 is rejected.
struct EvenPrime : MathError {
    using MathError::MathError;
};

// Evaluation at (or indistinguishably near) the pole s = 1 of a branch
// whose regularization denominator vanishes there.
struct PoleAtOne : MathError {
    using MathError::MathError;
};

// A level/term budget would be exceeded; the message reports the best
// level actually reached.
struct BudgetExceeded : MathError {
    using MathError::MathError;
};

// Operands belong to contexts with different primes.
struct ContextMismatch : MathError {
    using MathError::MathError;
};

// Text that does not parse; position is a 0-based offset into the input.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

}  // namespace padzeta
