#pragma once

#include <stdexcept>
#include <string>

namespace dlh {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operands live over different variable lists.
struct VariableMismatch : Error {
    explicit VariableMismatch(const std::string& msg) : Error(msg) {}
};

// Quotient ring has infinitely many standard monomials.
struct InfiniteDimensional : Error {
    explicit InfiniteDimensional(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Self-consistency check failed (a bug or an instance outside desk scale).
struct CheckFailure : Error {
    explicit CheckFailure(const std::string& msg) : Error(msg) {}
};

} // namespace dlh
