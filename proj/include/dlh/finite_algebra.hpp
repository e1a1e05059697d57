#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlh/ideal.hpp"
#include "dlh/linalg.hpp"
#include "dlh/poly.hpp"

namespace dlh {

// Element of a FiniteAlgebra, as coordinates in its basis.
using AlgElt = std::vector<Rational>;

// Finite-dimensional commutative algebra given by a basis, structure
// constants and unit coordinates. Monomial-basis quotients additionally
// carry the ambient variables and basis exponents so polynomials can be
// moved in and out.
class FiniteAlgebra {
public:
    FiniteAlgebra() = default;
    // Abstract algebra from structure constants. table[i][j] holds the
    // coordinates of basis_i * basis_j.
    FiniteAlgebra(std::vector<std::string> labels,
                  std::vector<std::vector<AlgElt>> table, AlgElt unit);

    int dim() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const AlgElt& unit() const { return unit_; }

    AlgElt zero() const { return AlgElt(labels_.size()); }
    AlgElt multiply(const AlgElt& u, const AlgElt& v) const;
    AlgElt power(const AlgElt& u, long k) const;
    RatMat mult_operator(const AlgElt& u) const;
    std::string element_str(const AlgElt& u) const;

    // Monomial-quotient extras; empty for abstract algebras.
    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<Exp>& basis_exps() const { return basis_; }
    bool has_polynomial_basis() const { return !vars_.empty(); }
    MultiPoly to_poly(const AlgElt& u) const;
    AlgElt from_poly(const MultiPoly& f) const; // reduces then reads coordinates

    // Checks structure-constant associativity/commutativity on all basis
    // triples/pairs; throws CheckFailure on violation.
    void verify_axioms() const;

    friend FiniteAlgebra quotient_algebra(const Ideal& I, bool parallel);

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<AlgElt>> table_;
    AlgElt unit_;
    std::vector<std::string> vars_;
    std::vector<Exp> basis_;
    Ideal ideal_;
    AlgElt coords_of_normal(const MultiPoly& nf) const;
};

// Quotient of the polynomial ring on I's variables by I, with the standard
// monomials as basis. Structure-constant rows are filled independently, so
// the computation can run across threads with identical output.
FiniteAlgebra quotient_algebra(const Ideal& I, bool parallel = true);

// Complete list of orthogonal idempotents summing to 1, obtained by
// splitting along rational eigenvalues of multiplication operators of the
// basis elements. Factors without rational roots are left unsplit.
std::vector<AlgElt> artinian_idempotents(const FiniteAlgebra& A);

// Inverse of u if u is a unit. Agreement with invertibility of the
// multiplication matrix holds by construction; tests cross-check it.
std::optional<AlgElt> algebra_inverse(const FiniteAlgebra& A, const AlgElt& u);
bool is_unit(const FiniteAlgebra& A, const AlgElt& u);

// The summand u*A for an idempotent u, with its inclusion back into A.
struct Summand {
    FiniteAlgebra alg;
    std::vector<AlgElt> inclusion; // summand basis vectors in A coordinates
    AlgElt include(const AlgElt& x) const;
    AlgElt restrict_to(const FiniteAlgebra& A, const AlgElt& x) const;
};
Summand summand_algebra(const FiniteAlgebra& A, const AlgElt& u);

// Minimal polynomial of u acting on the subalgebra unit*A (unit defaults to
// the algebra unit), as a dense univariate polynomial.
std::vector<Rational> min_poly(const FiniteAlgebra& A, const AlgElt& u, const AlgElt& unit);

// Tensor product A (x) B as an abstract algebra. Basis index is
// i * dim(B) + j for basis_i of A and basis_j of B.
FiniteAlgebra tensor_algebra(const FiniteAlgebra& A, const FiniteAlgebra& B);

} // namespace dlh
