#include "dlh/finite_algebra.hpp"

#include <algorithm>

#include "dlh/error.hpp"
#include "dlh/parallel.hpp"
#include "dlh/unipoly.hpp"

namespace dlh {

FiniteAlgebra::FiniteAlgebra(std::vector<std::string> labels,
                             std::vector<std::vector<AlgElt>> table, AlgElt unit)
    : labels_(std::move(labels)), table_(std::move(table)), unit_(std::move(unit)) {
    size_t d = labels_.size();
    if (table_.size() != d || unit_.size() != d)
        throw Error("structure constant shape mismatch");
    for (const auto& row : table_) {
        if (row.size() != d) throw Error("structure constant shape mismatch");
        for (const auto& cell : row)
            if (cell.size() != d) throw Error("structure constant shape mismatch");
    }
}

AlgElt FiniteAlgebra::multiply(const AlgElt& u, const AlgElt& v) const {
    size_t d = labels_.size();
    if (u.size() != d || v.size() != d) throw Error("element dimension mismatch");
    AlgElt out(d);
    for (size_t i = 0; i < d; ++i) {
        if (u[i].is_zero()) continue;
        for (size_t j = 0; j < d; ++j) {
            if (v[j].is_zero()) continue;
            Rational c = u[i] * v[j];
            const AlgElt& cell = table_[i][j];
            for (size_t k = 0; k < d; ++k)
                if (!cell[k].is_zero()) out[k] += c * cell[k];
        }
    }
    return out;
}

AlgElt FiniteAlgebra::power(const AlgElt& u, long k) const {
    if (k < 0) throw Error("negative algebra power");
    AlgElt acc = unit_;
    AlgElt base = u;
    while (k > 0) {
        if (k & 1) acc = multiply(acc, base);
        base = multiply(base, base);
        k >>= 1;
    }
    return acc;
}

RatMat FiniteAlgebra::mult_operator(const AlgElt& u) const {
    int d = dim();
    RatMat m(d, d);
    for (int j = 0; j < d; ++j) {
        AlgElt col(d);
        for (int i = 0; i < d; ++i) {
            if (u[i].is_zero()) continue;
            const AlgElt& cell = table_[i][j];
            for (int k = 0; k < d; ++k)
                if (!cell[k].is_zero()) col[k] += u[i] * cell[k];
        }
        for (int k = 0; k < d; ++k) m.at(k, j) = col[k];
    }
    return m;
}

std::string FiniteAlgebra::element_str(const AlgElt& u) const {
    std::string s;
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += u[i].str() + "*" + labels_[i];
    }
    return s.empty() ? "0" : s;
}

MultiPoly FiniteAlgebra::to_poly(const AlgElt& u) const {
    if (!has_polynomial_basis()) throw Error("algebra has no polynomial basis");
    MultiPoly out = MultiPoly::constant(vars_, Rational(0));
    for (size_t i = 0; i < u.size(); ++i)
        if (!u[i].is_zero()) out.add_term(basis_[i], u[i]);
    return out;
}

AlgElt FiniteAlgebra::coords_of_normal(const MultiPoly& nf) const {
    AlgElt out(labels_.size());
    GrevlexLess less;
    for (const auto& [e, c] : nf.terms()) {
        auto it = std::lower_bound(basis_.begin(), basis_.end(), e, less);
        if (it == basis_.end() || *it != e)
            throw CheckFailure("normal form contains a non-standard monomial");
        out[it - basis_.begin()] = c;
    }
    return out;
}

AlgElt FiniteAlgebra::from_poly(const MultiPoly& f) const {
    if (!has_polynomial_basis()) throw Error("algebra has no polynomial basis");
    return coords_of_normal(ideal_.normal_form(f));
}

void FiniteAlgebra::verify_axioms() const {
    int d = dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (table_[i][j] != table_[j][i])
                throw CheckFailure("structure constants not commutative");
    for (int j = 0; j < d; ++j) {
        AlgElt ej(d);
        ej[j] = Rational(1);
        if (multiply(unit_, ej) != ej) throw CheckFailure("unit does not act as identity");
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                AlgElt ek(d), ei(d);
                ek[k] = Rational(1);
                ei[i] = Rational(1);
                if (multiply(table_[i][j], ek) != multiply(ei, table_[j][k]))
                    throw CheckFailure("structure constants not associative");
            }
}

FiniteAlgebra quotient_algebra(const Ideal& I, bool parallel) {
    FiniteAlgebra A;
    A.vars_ = I.vars();
    A.basis_ = I.standard_monomials();
    A.ideal_ = I;
    size_t d = A.basis_.size();
    A.labels_.reserve(d);
    for (const auto& e : A.basis_)
        A.labels_.push_back(MultiPoly::monomial(A.vars_, e, Rational(1)).str());
    A.unit_.assign(d, Rational(0));
    if (d > 0) {
        // Standard monomials are sorted ascending, so 1 is the first entry.
        if (exp_degree(A.basis_[0]) != 0) throw CheckFailure("quotient basis misses 1");
        A.unit_[0] = Rational(1);
    }
    A.table_.assign(d, std::vector<AlgElt>(d));
    parallel_for(
        d,
        [&](size_t i) {
            MultiPoly mi = MultiPoly::monomial(A.vars_, A.basis_[i], Rational(1));
            for (size_t j = 0; j <= i; ++j) {
                MultiPoly mj = MultiPoly::monomial(A.vars_, A.basis_[j], Rational(1));
                A.table_[i][j] = A.coords_of_normal(I.normal_form(mi * mj));
            }
        },
        parallel);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i + 1; j < d; ++j) A.table_[i][j] = A.table_[j][i];
    return A;
}

std::vector<Rational> min_poly(const FiniteAlgebra& A, const AlgElt& u, const AlgElt& unit) {
    int d = A.dim();
    std::vector<std::vector<Rational>> rows;   // reduced power vectors
    std::vector<int> pivots;                   // pivot index of each row
    std::vector<std::vector<Rational>> combos; // row = combo over powers
    AlgElt p = unit;
    for (int k = 0; k <= d; ++k) {
        std::vector<Rational> v = p;
        std::vector<Rational> combo(k + 1);
        combo[k] = Rational(1);
        for (size_t r = 0; r < rows.size(); ++r) {
            Rational c = v[pivots[r]];
            if (c.is_zero()) continue;
            for (int t = 0; t < d; ++t) v[t] -= c * rows[r][t];
            for (size_t t = 0; t < combos[r].size(); ++t) combo[t] -= c * combos[r][t];
        }
        int piv = -1;
        for (int t = 0; t < d; ++t)
            if (!v[t].is_zero()) { piv = t; break; }
        if (piv < 0) return combo;
        Rational inv = v[piv].inv();
        for (int t = 0; t < d; ++t) v[t] = v[t] * inv;
        for (auto& c : combo) c = c * inv;
        rows.push_back(std::move(v));
        pivots.push_back(piv);
        combos.push_back(std::move(combo));
        p = A.multiply(p, u);
    }
    throw CheckFailure("minimal polynomial exceeded algebra dimension");
}

namespace {

AlgElt eval_poly_in(const FiniteAlgebra& A, const UniPoly& p, const AlgElt& x,
                    const AlgElt& one) {
    AlgElt acc = A.zero();
    for (long k = p.degree(); k >= 0; --k) {
        acc = A.multiply(acc, x);
        const Rational& c = p.coeff(k);
        if (!c.is_zero())
            for (size_t t = 0; t < acc.size(); ++t) acc[t] += c * one[t];
    }
    return acc;
}

bool is_zero_elt(const AlgElt& u) {
    for (const auto& c : u)
        if (!c.is_zero()) return false;
    return true;
}

// Splits the block with unit u along the coprime factorization of the
// minimal polynomial of h on u*A. Returns an empty list when no split.
std::vector<AlgElt> split_block(const FiniteAlgebra& A, const AlgElt& u, const AlgElt& h) {
    UniPoly mu(min_poly(A, h, u));
    std::vector<UniPoly> factors;
    UniPoly rem = mu;
    for (const auto& [root, mult] : mu.rational_roots()) {
        UniPoly f({-root, Rational(1)});
        factors.push_back(f.pow(mult));
        for (long t = 0; t < mult; ++t) rem = rem.divmod(f).first;
    }
    if (rem.degree() >= 1) factors.push_back(rem.monic());
    if (factors.size() < 2) return {};
    std::vector<AlgElt> pieces;
    AlgElt sum = A.zero();
    for (const auto& f : factors) {
        UniPoly cofactor = mu.divmod(f).first;
        auto [g, s, t] = UniPoly::ext_gcd(f, cofactor);
        if (g.degree() != 0) throw CheckFailure("factors of the minimal polynomial not coprime");
        AlgElt e = eval_poly_in(A, (t * cofactor).divmod(mu).second, h, u);
        if (is_zero_elt(e)) throw CheckFailure("idempotent collapsed to zero");
        if (A.multiply(e, e) != e) throw CheckFailure("projector is not idempotent");
        for (const auto& prev : pieces)
            if (!is_zero_elt(A.multiply(e, prev)))
                throw CheckFailure("projectors are not orthogonal");
        for (size_t i = 0; i < sum.size(); ++i) sum[i] += e[i];
        pieces.push_back(std::move(e));
    }
    if (sum != u) throw CheckFailure("projectors do not sum to the block unit");
    return pieces;
}

} // namespace

std::vector<AlgElt> artinian_idempotents(const FiniteAlgebra& A) {
    int d = A.dim();
    std::vector<AlgElt> blocks;
    if (d == 0) return blocks;
    blocks.push_back(A.unit());
    bool changed = true;
    while (changed) {
        changed = false;
        for (int g = 0; g < d && !changed; ++g) {
            AlgElt eg = A.zero();
            eg[g] = Rational(1);
            for (size_t b = 0; b < blocks.size(); ++b) {
                AlgElt h = A.multiply(blocks[b], eg);
                auto pieces = split_block(A, blocks[b], h);
                if (pieces.empty()) continue;
                blocks.erase(blocks.begin() + b);
                blocks.insert(blocks.begin() + b, pieces.begin(), pieces.end());
                changed = true;
                break;
            }
        }
    }
    return blocks;
}

std::optional<AlgElt> algebra_inverse(const FiniteAlgebra& A, const AlgElt& u) {
    auto x = solve(A.mult_operator(u), A.unit());
    if (!x) return std::nullopt;
    if (A.multiply(u, *x) != A.unit()) throw CheckFailure("inverse verification failed");
    return x;
}

bool is_unit(const FiniteAlgebra& A, const AlgElt& u) {
    return algebra_inverse(A, u).has_value();
}

AlgElt Summand::include(const AlgElt& x) const {
    if (x.size() != inclusion.size()) throw Error("summand element dimension mismatch");
    size_t n = inclusion.empty() ? 0 : inclusion[0].size();
    AlgElt out(n);
    for (size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero())
            for (size_t k = 0; k < n; ++k) out[k] += x[i] * inclusion[i][k];
    return out;
}

AlgElt Summand::restrict_to(const FiniteAlgebra& A, const AlgElt& x) const {
    // Inclusion rows are in reduced echelon form, so coordinates can be read
    // off at the pivots; membership is then verified exactly.
    AlgElt coords(inclusion.size());
    AlgElt residue = x;
    for (size_t i = 0; i < inclusion.size(); ++i) {
        int piv = -1;
        for (size_t k = 0; k < inclusion[i].size(); ++k)
            if (!inclusion[i][k].is_zero()) { piv = static_cast<int>(k); break; }
        coords[i] = residue[piv];
        for (size_t k = 0; k < residue.size(); ++k)
            residue[k] -= coords[i] * inclusion[i][k];
    }
    if (!is_zero_elt(residue)) throw CheckFailure("element does not lie in the summand");
    (void)A;
    return coords;
}

Summand summand_algebra(const FiniteAlgebra& A, const AlgElt& u) {
    if (A.multiply(u, u) != u) throw Error("summand requires an idempotent");
    RatMat m = A.mult_operator(u);
    // Echelon basis of the column space.
    RatMat mt = m.transpose();
    std::vector<int> pivots;
    int rk = rref(mt, &pivots);
    Summand s;
    for (int r = 0; r < rk; ++r) {
        AlgElt row(A.dim());
        for (int k = 0; k < A.dim(); ++k) row[k] = mt.at(r, k);
        s.inclusion.push_back(std::move(row));
    }
    std::vector<std::string> labels;
    for (const auto& v : s.inclusion) labels.push_back(A.element_str(v));
    std::vector<std::vector<AlgElt>> table(rk, std::vector<AlgElt>(rk));
    Summand probe = s;
    for (int i = 0; i < rk; ++i)
        for (int j = 0; j <= i; ++j) {
            AlgElt prod = A.multiply(s.inclusion[i], s.inclusion[j]);
            table[i][j] = probe.restrict_to(A, prod);
            table[j][i] = table[i][j];
        }
    AlgElt unit = probe.restrict_to(A, u);
    s.alg = FiniteAlgebra(std::move(labels), std::move(table), std::move(unit));
    return s;
}

FiniteAlgebra tensor_algebra(const FiniteAlgebra& A, const FiniteAlgebra& B) {
    int da = A.dim(), db = B.dim(), d = da * db;
    std::vector<std::string> labels;
    labels.reserve(d);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j)
            labels.push_back(A.labels()[i] + "(x)" + B.labels()[j]);
    std::vector<std::vector<AlgElt>> table(d, std::vector<AlgElt>(d, AlgElt(d)));
    std::vector<std::vector<AlgElt>> ta(da, std::vector<AlgElt>(da));
    std::vector<std::vector<AlgElt>> tb(db, std::vector<AlgElt>(db));
    for (int i = 0; i < da; ++i) {
        AlgElt ei(da);
        ei[i] = Rational(1);
        for (int k = 0; k < da; ++k) {
            AlgElt ek(da);
            ek[k] = Rational(1);
            ta[i][k] = A.multiply(ei, ek);
        }
    }
    for (int j = 0; j < db; ++j) {
        AlgElt ej(db);
        ej[j] = Rational(1);
        for (int l = 0; l < db; ++l) {
            AlgElt el(db);
            el[l] = Rational(1);
            tb[j][l] = B.multiply(ej, el);
        }
    }
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j)
            for (int k = 0; k < da; ++k)
                for (int l = 0; l < db; ++l) {
                    AlgElt& out = table[i * db + j][k * db + l];
                    for (int p = 0; p < da; ++p) {
                        if (ta[i][k][p].is_zero()) continue;
                        for (int q = 0; q < db; ++q) {
                            if (tb[j][l][q].is_zero()) continue;
                            out[p * db + q] += ta[i][k][p] * tb[j][l][q];
                        }
                    }
                }
    AlgElt unit(d);
    for (int p = 0; p < da; ++p)
        for (int q = 0; q < db; ++q) unit[p * db + q] = A.unit()[p] * B.unit()[q];
    return FiniteAlgebra(std::move(labels), std::move(table), std::move(unit));
}

} // namespace dlh
