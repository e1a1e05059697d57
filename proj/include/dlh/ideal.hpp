#pragma once

#include <vector>

#include "dlh/poly.hpp"

namespace dlh {

// Full normal form of f against G: every term of the remainder is reduced.
MultiPoly poly_reduce(const MultiPoly& f, const std::vector<MultiPoly>& G);

MultiPoly s_poly(const MultiPoly& f, const MultiPoly& g);

// Buchberger's algorithm with the coprime leading-term criterion, followed
// by auto-reduction. Result is the reduced Groebner basis: monic, mutually
// reduced, sorted by leading exponent.
std::vector<MultiPoly> buchberger(std::vector<MultiPoly> gens);

class Ideal {
public:
    Ideal() = default;
    explicit Ideal(std::vector<MultiPoly> gens);

    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<MultiPoly>& generators() const { return gens_; }
    const std::vector<MultiPoly>& basis() const { return gb_; }

    MultiPoly normal_form(const MultiPoly& f) const;
    bool contains(const MultiPoly& f) const { return normal_form(f).is_zero(); }
    bool is_unit_ideal() const;

    // True if the quotient by this ideal is finite-dimensional, i.e. every
    // variable has a pure power among the leading terms of the basis.
    bool is_finite_dimensional() const;

    // Monomials outside the leading-term ideal, ascending in the monomial
    // order. Throws InfiniteDimensional when infinite.
    std::vector<Exp> standard_monomials() const;

private:
    std::vector<std::string> vars_;
    std::vector<MultiPoly> gens_;
    std::vector<MultiPoly> gb_;
};

} // namespace dlh
