#pragma once

#include <optional>
#include <vector>

#include "dlh/rational.hpp"

namespace dlh {

// Dense matrix over Rational, row-major.
class RatMat {
public:
    RatMat() = default;
    RatMat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols) {}
    static RatMat identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Rational& at(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const Rational& at(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    friend RatMat operator*(const RatMat& a, const RatMat& b);
    friend RatMat operator+(const RatMat& a, const RatMat& b);
    friend RatMat operator-(const RatMat& a, const RatMat& b);
    friend bool operator==(const RatMat& a, const RatMat& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }
    RatMat transpose() const;
    std::vector<Rational> apply(const std::vector<Rational>& v) const;
    bool is_zero() const;

private:
    int r_ = 0, c_ = 0;
    std::vector<Rational> a_;
};

// Reduced row echelon form in place. Returns the rank; if pivots is non-null
// it receives the pivot column of each nonzero row.
int rref(RatMat& m, std::vector<int>* pivots = nullptr);

int rank(RatMat m);

// Exact solution of A x = b, or nullopt if inconsistent. If the solution is
// not unique, free variables are set to zero.
std::optional<std::vector<Rational>> solve(const RatMat& A, const std::vector<Rational>& b);

// Basis of the null space as matrix columns, in reduced echelon form.
RatMat kernel(const RatMat& A);

std::optional<RatMat> inverse(const RatMat& A);

// ---------------------------------------------------------------------------
// Sparse exact linear algebra, for the larger homology computations.

// Sparse vector: (index, value) pairs sorted by index, values nonzero.
using SparseVec = std::vector<std::pair<int, Rational>>;

SparseVec sparse_add(const SparseVec& a, const SparseVec& b);
// a + c*b
SparseVec sparse_axpy(const SparseVec& a, const Rational& c, const SparseVec& b);
SparseVec sparse_scale(const SparseVec& a, const Rational& c);
Rational sparse_get(const SparseVec& v, int idx);

// Column-sparse matrix.
struct SparseMat {
    int rows = 0;
    std::vector<SparseVec> cols;
    SparseMat() = default;
    SparseMat(int r, int c) : rows(r), cols(c) {}
    int ncols() const { return static_cast<int>(cols.size()); }
    SparseVec apply(const SparseVec& v) const; // matrix * vector
    long long nnz() const;
};

long sparse_rank(const SparseMat& m);

// Incremental echelon basis of a growing span. Vectors are reduced against
// the current echelon; independent remainders are normalized and kept.
class Echelon {
public:
    // Returns true if v was independent of the current span.
    bool insert(SparseVec v, int tag);
    // Reduce u against the echelon; coefficients used against rows with
    // tag >= 0 are accumulated into coeffs[tag].
    SparseVec reduce(SparseVec u, std::vector<Rational>* coeffs = nullptr) const;
    int size() const { return static_cast<int>(rows_.size()); }

private:
    struct Row {
        int pivot;
        SparseVec vec; // normalized: vec[pivot] = 1
        int tag;
    };
    std::vector<Row> rows_;
    std::vector<int> pivot_of_; // pivot index -> row id, lazily sized
    int find_row(int pivot) const;
};

// Subquotient ker(d_out) / im(d_in) of a based vector space, with explicit
// homology representatives and coordinates for induced maps.
class Subquotient {
public:
    Subquotient(const SparseMat& d_out, const SparseMat& d_in);
    int dim() const { return static_cast<int>(reps_.size()); }
    const std::vector<SparseVec>& reps() const { return reps_; }
    // Coordinates of a cycle u in the homology basis; throws if u is not a
    // cycle modulo the image.
    std::vector<Rational> coords(const SparseVec& u) const;

private:
    Echelon ech_; // image rows tagged -1, homology reps tagged 0..dim-1
    std::vector<SparseVec> reps_;
};

} // namespace dlh
