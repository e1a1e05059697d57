#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlh/poly.hpp"
#include "dlh/polymat.hpp"
#include "dlh/symfn.hpp"

namespace dlh {

// Generator of the nilHecke algebra on a strands: multiplication xi_i
// (1 <= i <= a) or divided difference del_i (1 <= i <= a-1).
struct NHGen {
    bool is_xi;
    int index; // 1-based
};

struct NHTerm {
    Rational coeff;
    std::vector<NHGen> gens; // operator composition, rightmost acts first
};

// Linear combination of generator words, acting on Q[x_1..x_a].
class NHWord {
public:
    explicit NHWord(int a) : a_(a) {}
    static NHWord identity(int a);
    static NHWord xi(int a, int i);
    static NHWord del(int a, int i);

    int strands() const { return a_; }
    const std::vector<NHTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend NHWord operator*(const NHWord& u, const NHWord& v); // composition
    friend NHWord operator+(const NHWord& u, const NHWord& v);
    friend NHWord operator-(const NHWord& u, const NHWord& v);
    NHWord scaled(const Rational& c) const;
    NHWord pow(int k) const;

    MultiPoly apply(const MultiPoly& p) const;
    // Operator equality tested on all monomials of total degree <= bound.
    bool equals_on_degree(const NHWord& other, int degree_bound) const;

    std::string str() const;

private:
    int a_;
    std::vector<NHTerm> terms_;
};

// Divided difference (p - s_i p) / (x_i - x_{i+1}), i 1-based.
MultiPoly divided_difference(const MultiPoly& p, int i);
MultiPoly antisymmetrize(const MultiPoly& p);
// Action of the longest divided difference: antisymmetrize, then divide by
// the Vandermonde determinant. Oracle for the word form below.
MultiPoly d_longest_oracle(const MultiPoly& p);

NHWord delta_word(int a);     // xi_1^{a-1} xi_2^{a-2} ... xi_{a-1}
NHWord d_longest_word(int a); // (del_1..del_{a-1})(del_1..del_{a-2})...(del_1)
NHWord e_a_word(int a);       // delta_a D_a, idempotent

// Monomials x^e with 0 <= e_i <= a-i, grouped into blocks indexed by
// (e_2,..,e_a) in ascending lexicographic order; within a block the power
// of x_1 descends from a-1 to 0.
std::vector<Exp> theta_basis(int a);

// Matrix of w acting on Q[x_1..x_a] viewed as a free module over the
// symmetric polynomials, in the theta_basis ordering.
PolyMat theta(int a, const NHWord& w);

// The block-diagonal companion form of theta(xi_1): (a-1)! identical a x a
// blocks with first column e_1, -e_2, ..., (-1)^{a-1}e_a and a shifted
// identity above the diagonal.
PolyMat theta_xi1_companion(int a);

// The a x a block of theta(xi_1)^k built purely from the recursion
//   b^k_{i,j} = delta_{i+k,j}                          for j > k,
//   b^k_{i,j} = h_{k+i-j} - sum_{l<i} h_{i-l} b^k_{l,j} for j <= k.
PolyMat b_recursion_oracle(int a, int k);

// a! x a! block diagonal matrix with (a-1)! copies of the given a x a block.
PolyMat assemble_blocks(int a, const PolyMat& block);

// theta(P(xi_1)) = sum_l (-1)^l e_l(Sigma) theta(xi_1)^{N-l}.
PolyMat theta_char_poly(int a, const RootMultiset& sigma);

struct NHCheckReport {
    bool passed = true;
    std::vector<std::string> failures;
    void fail(const std::string& what) {
        passed = false;
        failures.push_back(what);
    }
};

// Verifies the five defining relation families as operator identities on
// all monomials of total degree <= degree_bound.
NHCheckReport check_relations(int a, int degree_bound);

struct DeformedQuotientReport {
    bool passed = true;
    std::vector<std::string> failures;
    long center_dim = 0; // binomial(N, a)
    long matrix_dim = 0; // (a!)^2 * binomial(N, a)
    void fail(const std::string& what) {
        passed = false;
        failures.push_back(what);
    }
};

// Checks that theta(P(xi_1)) has first block row h_{N+1-j}(X - Sigma), that
// every other entry reduces to zero modulo the ideal those entries generate,
// and that the resulting matrix algebra has dimension (a!)^2 binomial(N, a).
DeformedQuotientReport deformed_quotient_check(int a, const RootMultiset& sigma);

// Operator identity schur_alpha(xi) e_a = e_a xi^alpha e_a, tested on all
// monomials of total degree <= degree_bound.
bool check_explosion(int a, const Partition& alpha, int degree_bound);

// All exponent vectors in `nvars` variables of total degree <= bound.
std::vector<Exp> monomials_up_to(int nvars, int bound);

long binomial(int n, int k);
long factorial(int n);

} // namespace dlh
