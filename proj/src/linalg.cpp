#include "dlh/linalg.hpp"

#include <algorithm>

#include "dlh/error.hpp"

namespace dlh {

RatMat RatMat::identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

RatMat operator*(const RatMat& a, const RatMat& b) {
    if (a.c_ != b.r_) throw Error("matrix product shape mismatch");
    RatMat out(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
        for (int k = 0; k < a.c_; ++k) {
            const Rational& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < b.c_; ++j) {
                const Rational& bkj = b.at(k, j);
                if (!bkj.is_zero()) out.at(i, j) += aik * bkj;
            }
        }
    return out;
}

RatMat operator+(const RatMat& a, const RatMat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw Error("matrix sum shape mismatch");
    RatMat out(a.r_, a.c_);
    for (size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.a_[i] + b.a_[i];
    return out;
}

RatMat operator-(const RatMat& a, const RatMat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw Error("matrix difference shape mismatch");
    RatMat out(a.r_, a.c_);
    for (size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.a_[i] - b.a_[i];
    return out;
}

RatMat RatMat::transpose() const {
    RatMat out(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) out.at(j, i) = at(i, j);
    return out;
}

std::vector<Rational> RatMat::apply(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != c_) throw Error("matrix apply shape mismatch");
    std::vector<Rational> out(r_);
    for (int i = 0; i < r_; ++i) {
        Rational acc;
        for (int j = 0; j < c_; ++j)
            if (!at(i, j).is_zero() && !v[j].is_zero()) acc += at(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

bool RatMat::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

int rref(RatMat& m, std::vector<int>* pivots) {
    if (pivots) pivots->clear();
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int piv = -1;
        for (int i = rank; i < m.rows(); ++i)
            if (!m.at(i, col).is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = col; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(rank, j));
        Rational inv = m.at(rank, col).inv();
        for (int j = col; j < m.cols(); ++j) m.at(rank, j) = m.at(rank, j) * inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == rank) continue;
            Rational f = m.at(i, col);
            if (f.is_zero()) continue;
            for (int j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(rank, j);
        }
        if (pivots) pivots->push_back(col);
        ++rank;
    }
    return rank;
}

int rank(RatMat m) { return rref(m); }

std::optional<std::vector<Rational>> solve(const RatMat& A, const std::vector<Rational>& b) {
    if (static_cast<int>(b.size()) != A.rows()) throw Error("solve shape mismatch");
    RatMat aug(A.rows(), A.cols() + 1);
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols()) = b[i];
    }
    std::vector<int> pivots;
    int rk = rref(aug, &pivots);
    for (int r = 0; r < rk; ++r)
        if (pivots[r] == A.cols()) return std::nullopt;
    std::vector<Rational> x(A.cols());
    for (int r = 0; r < rk; ++r) x[pivots[r]] = aug.at(r, A.cols());
    return x;
}

RatMat kernel(const RatMat& A) {
    RatMat m = A;
    std::vector<int> pivots;
    int rk = rref(m, &pivots);
    std::vector<bool> is_pivot(A.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int j = 0; j < A.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    RatMat K(A.cols(), static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int f = free_cols[k];
        K.at(f, static_cast<int>(k)) = Rational(1);
        for (int r = 0; r < rk; ++r) K.at(pivots[r], static_cast<int>(k)) = -m.at(r, f);
    }
    return K;
}

std::optional<RatMat> inverse(const RatMat& A) {
    if (A.rows() != A.cols()) throw Error("inverse of non-square matrix");
    int n = A.rows();
    RatMat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, n + i) = Rational(1);
    }
    if (rref(aug) != n) return std::nullopt;
    RatMat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

// ---------------------------------------------------------------------------

SparseVec sparse_axpy(const SparseVec& a, const Rational& c, const SparseVec& b) {
    if (c.is_zero()) return a;
    SparseVec out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, c * b[j].second);
            ++j;
        } else {
            Rational v = a[i].second + c * b[j].second;
            if (!v.is_zero()) out.emplace_back(a[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVec sparse_add(const SparseVec& a, const SparseVec& b) {
    return sparse_axpy(a, Rational(1), b);
}

SparseVec sparse_scale(const SparseVec& a, const Rational& c) {
    if (c.is_zero()) return {};
    SparseVec out = a;
    for (auto& [i, v] : out) v = v * c;
    return out;
}

Rational sparse_get(const SparseVec& v, int idx) {
    auto it = std::lower_bound(v.begin(), v.end(), idx,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != v.end() && it->first == idx) return it->second;
    return Rational(0);
}

SparseVec SparseMat::apply(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [j, c] : v) {
        if (j < 0 || j >= ncols()) throw Error("sparse apply index out of range");
        out = sparse_axpy(out, c, cols[j]);
    }
    return out;
}

long long SparseMat::nnz() const {
    long long n = 0;
    for (const auto& c : cols) n += static_cast<long long>(c.size());
    return n;
}

long sparse_rank(const SparseMat& m) {
    Echelon ech;
    long rk = 0;
    // Insert shorter columns first; their pivots tend to keep fill-in low.
    std::vector<int> order(m.cols.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return m.cols[a].size() < m.cols[b].size();
    });
    for (int j : order)
        if (ech.insert(m.cols[j], -1)) ++rk;
    return rk;
}

int Echelon::find_row(int pivot) const {
    if (pivot < 0 || pivot >= static_cast<int>(pivot_of_.size())) return -1;
    return pivot_of_[pivot];
}

SparseVec Echelon::reduce(SparseVec u, std::vector<Rational>* coeffs) const {
    size_t scan = 0;
    while (scan < u.size()) {
        int idx = u[scan].first;
        int row = find_row(idx);
        if (row < 0) {
            ++scan;
            continue;
        }
        Rational c = u[scan].second;
        u = sparse_axpy(u, -c, rows_[row].vec);
        if (coeffs && rows_[row].tag >= 0) {
            if (rows_[row].tag >= static_cast<int>(coeffs->size()))
                coeffs->resize(rows_[row].tag + 1);
            (*coeffs)[rows_[row].tag] += c;
        }
        // Entries before scan have pivots with no echelon row; they stay.
    }
    return u;
}

bool Echelon::insert(SparseVec v, int tag) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    int pivot = v.front().first;
    Rational inv = v.front().second.inv();
    for (auto& [i, c] : v) c = c * inv;
    if (pivot >= static_cast<int>(pivot_of_.size())) pivot_of_.resize(pivot + 1, -1);
    pivot_of_[pivot] = static_cast<int>(rows_.size());
    rows_.push_back(Row{pivot, std::move(v), tag});
    return true;
}

Subquotient::Subquotient(const SparseMat& d_out, const SparseMat& d_in) {
    if (d_in.rows != 0 && d_out.ncols() != 0 && d_in.rows != d_out.ncols())
        throw Error("subquotient dimension mismatch");
    for (const auto& col : d_in.cols) ech_.insert(col, -1);
    // Incremental kernel of d_out: echelonize its columns while tracking the
    // combination of basis vectors that produced each reduced column.
    struct Pair {
        SparseVec img;
        SparseVec pre;
    };
    std::vector<Pair> rows;
    std::vector<int> pivot_of;
    int n = d_out.ncols();
    for (int j = 0; j < n; ++j) {
        SparseVec img = d_out.cols[j];
        SparseVec pre{{j, Rational(1)}};
        size_t scan = 0;
        while (scan < img.size()) {
            int idx = img[scan].first;
            int row = (idx < static_cast<int>(pivot_of.size())) ? pivot_of[idx] : -1;
            if (row < 0) {
                ++scan;
                continue;
            }
            Rational c = img[scan].second;
            img = sparse_axpy(img, -c, rows[row].img);
            pre = sparse_axpy(pre, -c, rows[row].pre);
        }
        if (img.empty()) {
            // pre is a kernel vector of d_out; quotient by the image span.
            SparseVec rem = ech_.reduce(pre);
            if (!rem.empty()) {
                Rational inv = rem.front().second.inv();
                SparseVec norm = sparse_scale(rem, inv);
                ech_.insert(norm, static_cast<int>(reps_.size()));
                reps_.push_back(norm);
            }
        } else {
            int pivot = img.front().first;
            Rational inv = img.front().second.inv();
            img = sparse_scale(img, inv);
            pre = sparse_scale(pre, inv);
            if (pivot >= static_cast<int>(pivot_of.size())) pivot_of.resize(pivot + 1, -1);
            pivot_of[pivot] = static_cast<int>(rows.size());
            rows.push_back(Pair{std::move(img), std::move(pre)});
        }
    }
}

std::vector<Rational> Subquotient::coords(const SparseVec& u) const {
    std::vector<Rational> c(reps_.size());
    SparseVec rem = ech_.reduce(u, &c);
    if (!rem.empty()) throw CheckFailure("vector is not a cycle modulo the image");
    c.resize(reps_.size());
    return c;
}

} // namespace dlh
