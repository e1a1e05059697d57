#pragma once

#include <utility>
#include <vector>

#include "dlh/poly.hpp"
#include "dlh/rational.hpp"

namespace dlh {

// Dense univariate polynomial over Rational, coefficients ascending, trimmed.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UniPoly constant(const Rational& c) { return UniPoly({c}); }
    static UniPoly x() { return UniPoly({Rational(0), Rational(1)}); }
    // Monic polynomial with the given roots (with multiplicity).
    static UniPoly from_roots(const std::vector<Rational>& roots);

    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const {
        return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Rational(0);
    }
    Rational leading() const;

    UniPoly operator-() const;
    friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }
    UniPoly scaled(const Rational& s) const;
    UniPoly monic() const;
    UniPoly pow(int e) const;

    // Quotient and remainder; divisor must be nonzero.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const;
    UniPoly mod(const UniPoly& d) const { return divmod(d).second; }

    static UniPoly gcd(UniPoly a, UniPoly b); // monic gcd
    // Returns (g, s, t) with s*a + t*b = g = monic gcd(a, b).
    static std::tuple<UniPoly, UniPoly, UniPoly> ext_gcd(const UniPoly& a, const UniPoly& b);

    UniPoly derivative() const;
    // Antiderivative with zero constant term.
    UniPoly antiderivative() const;

    Rational eval(const Rational& v) const;
    // Compose with (x + shift).
    UniPoly shift(const Rational& s) const;

    // All rational roots with multiplicities, found by the rational root
    // theorem plus deflation.
    std::vector<std::pair<Rational, int>> rational_roots() const;

    MultiPoly to_multipoly(const std::vector<std::string>& vars, int var_index) const;
    static UniPoly from_multipoly(const MultiPoly& p, int var_index);

    std::string str(const std::string& var = "x") const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

} // namespace dlh
