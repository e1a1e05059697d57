#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlh/rational.hpp"

namespace dlh {

using Exp = std::vector<int>; // exponent vector, one slot per variable

int exp_degree(const Exp& e);
Exp exp_add(const Exp& a, const Exp& b);
bool exp_divides(const Exp& a, const Exp& b); // a | b componentwise
Exp exp_sub(const Exp& a, const Exp& b);      // requires a >= b componentwise
Exp exp_lcm(const Exp& a, const Exp& b);

// Graded reverse lexicographic order: higher total degree wins; at equal
// degree the monomial with the smaller exponent in the last differing
// position is larger.
struct GrevlexLess {
    bool operator()(const Exp& a, const Exp& b) const;
};

// Sparse multivariate polynomial over Rational with a fixed ordered variable
// list. No zero coefficients are stored; the term map is ordered by grevlex,
// so the leading term is the map's last entry.
class MultiPoly {
public:
    using TermMap = std::map<Exp, Rational, GrevlexLess>;

    MultiPoly() = default;
    explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static MultiPoly constant(const std::vector<std::string>& vars, const Rational& c);
    static MultiPoly variable(const std::vector<std::string>& vars, int index);
    static MultiPoly monomial(const std::vector<std::string>& vars, const Exp& e, const Rational& c);

    const std::vector<std::string>& vars() const { return vars_; }
    int nvars() const { return static_cast<int>(vars_.size()); }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    int degree() const; // total degree; -1 for the zero polynomial

    const Exp& leading_exp() const;
    const Rational& leading_coeff() const;
    Rational coeff(const Exp& e) const;

    void add_term(const Exp& e, const Rational& c); // accumulates, drops zeros

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
    MultiPoly scaled(const Rational& c) const;
    MultiPoly mul_monomial(const Exp& e, const Rational& c) const;
    MultiPoly pow(int e) const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b);
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    // Exact division: throws CheckFailure unless g divides *this exactly.
    MultiPoly exact_div(const MultiPoly& g) const;

    // Substitute values for all variables.
    Rational evaluate(const std::vector<Rational>& point) const;
    // Substitute a polynomial (over the same variable list) for one variable.
    MultiPoly substitute(int var_index, const MultiPoly& value) const;
    // Substitute rational values for a subset of variables (by index).
    MultiPoly substitute_values(const std::map<int, Rational>& values) const;

    // Re-express over a variable list that contains all of this one's
    // variables (matched by name).
    MultiPoly lift_to(const std::vector<std::string>& bigger) const;
    // Drop variables that do not occur; keeps relative order.
    MultiPoly drop_unused() const;

    bool is_symmetric() const; // invariant under all adjacent transpositions
    MultiPoly apply_transposition(int i) const; // swap variables i, i+1
    MultiPoly apply_permutation(const std::vector<int>& perm) const; // x_i -> x_{perm[i]}

    std::string str() const;

    // Parses the canonical text format, e.g. "3/2*x1^2*x2 - x3 + 1".
    // Every name occurring in the text must be in `vars`.
    static MultiPoly parse(const std::string& text, const std::vector<std::string>& vars);

    void check_same_vars(const MultiPoly& o) const;

private:
    std::vector<std::string> vars_;
    TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const MultiPoly& p);

// Standard variable lists x1..xn (or a custom stem).
std::vector<std::string> make_vars(int n, const std::string& stem = "x");

} // namespace dlh
