#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlh/poly.hpp"
#include "dlh/unipoly.hpp"

namespace dlh {

// Integer partition, weakly decreasing positive parts, stored trimmed.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);
    static Partition parse(const std::string& text); // "[3,1,1]"

    int length() const { return static_cast<int>(parts_.size()); }
    long size() const; // sum of parts
    int part(int i) const { return i >= 0 && i < length() ? parts_[i] : 0; }
    const std::vector<int>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    Partition conjugate() const;
    bool fits_in_box(int rows, int cols) const;
    std::string str() const;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.parts_ == b.parts_;
    }
    friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
    friend bool operator<(const Partition& a, const Partition& b) {
        return a.parts_ < b.parts_;
    }

private:
    std::vector<int> parts_;
};

// Complement in the rows x cols box: hat(a)_i = cols - a_{rows+1-i}.
Partition box_complement(const Partition& a, int rows, int cols);

// All partitions with length <= rows and parts <= cols, ordered by size then
// lexicographically.
std::vector<Partition> partitions_in_box(int rows, int cols);

// All partitions of d with the given bounds.
std::vector<Partition> partitions_of(int d, int max_len, int max_part);

// Multiset of N rational deformation roots. Distinct roots are kept sorted
// ascending; the root list itself is stored sorted.
class RootMultiset {
public:
    RootMultiset() = default;
    explicit RootMultiset(std::vector<Rational> roots);
    static RootMultiset parse(const std::string& text); // "0,0,1" or "1/2,-1/2"

    int size() const { return static_cast<int>(roots_.size()); }
    const std::vector<Rational>& roots() const { return roots_; }
    int num_distinct() const { return static_cast<int>(distinct_.size()); }
    const std::vector<Rational>& distinct() const { return distinct_; }
    const std::vector<int>& multiplicities() const { return mult_; }
    bool all_distinct() const { return size() == num_distinct(); }

    Rational elementary(int i) const; // e_i of the root list
    UniPoly char_poly() const;        // P(x), monic with these roots

    bool contains(const RootMultiset& sub) const;
    RootMultiset minus(const RootMultiset& sub) const;
    RootMultiset merged(const RootMultiset& other) const;
    bool disjoint_from(const RootMultiset& other) const;
    // All sub-multisets of the given size, deterministic order.
    std::vector<RootMultiset> multisubsets(int k) const;

    std::string str() const;
    friend bool operator==(const RootMultiset& a, const RootMultiset& b) {
        return a.roots_ == b.roots_;
    }
    friend bool operator!=(const RootMultiset& a, const RootMultiset& b) { return !(a == b); }
    friend bool operator<(const RootMultiset& a, const RootMultiset& b) {
        return a.roots_ < b.roots_;
    }

private:
    std::vector<Rational> roots_;
    std::vector<Rational> distinct_;
    std::vector<int> mult_;
};

// Symmetric polynomials live in an ambient ring `vars`; the alphabet is a
// list of variable indices into that ring.
std::vector<int> full_alphabet(const std::vector<std::string>& vars);

MultiPoly elem_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet, int k);
MultiPoly comp_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet, int k);
MultiPoly power_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet, int k);
MultiPoly monomial_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet,
                       const Partition& p);
MultiPoly vandermonde(const std::vector<std::string>& vars, const std::vector<int>& alphabet);
// Schur polynomial via the bialternant; zero when length(p) > |alphabet|.
MultiPoly schur_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet,
                    const Partition& p);

// h_k(X - Sigma) = sum_i (-1)^i e_i(Sigma) h_{k-i}(X).
MultiPoly h_diff(const std::vector<std::string>& vars, const std::vector<int>& alphabet, int k,
                 const RootMultiset& sigma);

bool is_symmetric_in(const MultiPoly& f, const std::vector<int>& alphabet);

// Expansion of a symmetric polynomial in the Schur basis of its alphabet,
// by leading-term triangularity.
std::map<Partition, Rational> schur_expansion(const MultiPoly& f,
                                              const std::vector<int>& alphabet);

long lr_coeff(const Partition& a, const Partition& b, const Partition& c);

// Rewrites a polynomial symmetric in `alphabet` as a polynomial in the
// elementary symmetric polynomials of that alphabet, over the ring `evars`.
MultiPoly symmetric_to_elementary(const MultiPoly& f, const std::vector<int>& alphabet,
                                  const std::vector<std::string>& evars);

// h_k of an alphabet of size a, written in elementary coordinates E1..Ea.
MultiPoly comp_in_elementary(const std::vector<std::string>& evars, int a, int k);
MultiPoly h_diff_in_elementary(const std::vector<std::string>& evars, int a, int k,
                               const RootMultiset& sigma);

// Partner of p in the two-sheet digon sum: conjugate of the box complement,
// a partition with at most `cols` rows. The convention is fixed by symbolic
// expansion at small (rows, cols); see the tests.
Partition split_partner(const Partition& p, int rows, int cols);

// sum over p in P(a,b) of (-1)^{ab - |p|} schur_p(X) schur_partner(Y), in
// the ring x1..xa, y1..yb.
MultiPoly split_unit_sum(int a, int b);
// The sum evaluated at X -> A, Y -> B; equals (-1)^{ab} prod (mu - lambda)
// over lambda in A, mu in B. Nonzero iff A and B are disjoint.
Rational split_unit_value(const RootMultiset& A, const RootMultiset& B);

} // namespace dlh
