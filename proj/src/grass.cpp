#include "dlh/grass.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "dlh/error.hpp"
#include "dlh/ideal.hpp"

namespace dlh {

namespace {

long choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_shape(int N, int a, const RootMultiset& sigma) {
    if (a < 0 || a > N) throw Error("need 0 <= a <= N");
    if (sigma.size() != N) throw Error("need one deformation root per column, got " +
                                       std::to_string(sigma.size()) + " for N = " +
                                       std::to_string(N));
}

// Per-distinct-root counts of M against the distinct roots of sigma.
std::vector<int> counts_against(const RootMultiset& sigma, const RootMultiset& M) {
    const auto& roots = sigma.distinct();
    std::vector<int> counts(roots.size(), 0);
    for (const auto& r : M.roots()) {
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end())
            throw Error("root " + r.str() + " does not appear in the deformation multiset");
        counts[static_cast<size_t>(it - roots.begin())] += 1;
    }
    return counts;
}

// Tensor product of univariate quotient rings Q[x_r]/m_r(x_r). Basis
// monomials are indexed mixed-radix with earlier variables most significant.
// Each variable optionally carries a shift: embed_shifted substitutes
// x_r -> x_r + shift_r before reducing, embed_plain does not.
class TensorRing {
public:
    TensorRing(std::vector<UniPoly> moduli, std::vector<Rational> shifts)
        : mod_(std::move(moduli)), shift_(std::move(shifts)) {
        if (shift_.empty()) shift_.assign(mod_.size(), Rational(0));
        if (shift_.size() != mod_.size()) throw Error("need one shift per variable");
        long total = 1;
        for (const auto& m : mod_) {
            if (m.degree() < 1) throw Error("modulus must have positive degree");
            dims_.push_back(m.degree());
            total *= m.degree();
        }
        dim_ = total;
        rows_.resize(mod_.size());
        shift_rows_.resize(mod_.size());
    }

    int nvars() const { return static_cast<int>(mod_.size()); }
    long dim() const { return dim_; }

    long index_of(const Exp& e) const {
        long idx = 0;
        for (size_t v = 0; v < dims_.size(); ++v) idx = idx * dims_[v] + e[v];
        return idx;
    }

    Exp decode(long idx) const {
        Exp e(dims_.size(), 0);
        for (int v = static_cast<int>(dims_.size()) - 1; v >= 0; --v) {
            e[v] = static_cast<int>(idx % dims_[v]);
            idx /= dims_[v];
        }
        return e;
    }

    SparseVec embed_plain(const MultiPoly& f) { return embed(f, false); }
    SparseVec embed_shifted(const MultiPoly& f) { return embed(f, true); }

    SparseVec mul(const SparseVec& u, const SparseVec& w) {
        std::map<long, Rational> acc;
        std::vector<Exp> wexp;
        wexp.reserve(w.size());
        for (const auto& [iw, cw] : w) {
            (void)cw;
            wexp.push_back(decode(iw));
        }
        for (const auto& [iu, cu] : u) {
            Exp a = decode(iu);
            for (size_t t = 0; t < w.size(); ++t) {
                Exp e = a;
                for (size_t v = 0; v < e.size(); ++v) e[v] += wexp[t][v];
                scatter(acc, e, cu * w[t].second, false);
            }
        }
        return collect(acc);
    }

private:
    SparseVec embed(const MultiPoly& f, bool shifted) {
        if (static_cast<int>(f.vars().size()) != nvars())
            throw Error("variable count mismatch in tensor ring");
        std::map<long, Rational> acc;
        for (const auto& [e, c] : f.terms()) scatter(acc, e, c, shifted);
        return collect(acc);
    }

    static SparseVec collect(const std::map<long, Rational>& acc) {
        SparseVec out;
        for (const auto& [i, c] : acc)
            if (!c.is_zero()) out.emplace_back(static_cast<int>(i), c);
        return out;
    }

    // Accumulate c * prod_v image(x_v^{e_v}) into acc.
    void scatter(std::map<long, Rational>& acc, const Exp& e, const Rational& c,
                 bool shifted) {
        std::vector<std::pair<long, Rational>> cur{{0, c}};
        std::vector<std::pair<long, Rational>> next;
        for (size_t v = 0; v < dims_.size(); ++v) {
            const std::vector<Rational> row = row_for(v, e[v], shifted);
            next.clear();
            for (const auto& [pi, pc] : cur)
                for (int t = 0; t < dims_[v]; ++t) {
                    if (row[t].is_zero()) continue;
                    next.emplace_back(pi * dims_[v] + t, pc * row[t]);
                }
            cur.swap(next);
            if (cur.empty()) return;
        }
        for (const auto& [i, cc] : cur) acc[i] += cc;
    }

    // Dense coefficients of (x_v + shift_v)^e (or x_v^e) modulo m_v.
    std::vector<Rational> row_for(size_t v, int e, bool shifted) {
        auto& table = shifted ? shift_rows_[v] : rows_[v];
        while (static_cast<int>(table.size()) <= e) {
            int k = static_cast<int>(table.size());
            UniPoly p;
            if (k == 0) {
                p = UniPoly::constant(Rational(1));
            } else {
                UniPoly base = shifted ? UniPoly({shift_[v], Rational(1)}) : UniPoly::x();
                p = (UniPoly(table.back()) * base).mod(mod_[v]);
            }
            std::vector<Rational> row(dims_[v]);
            for (int t = 0; t < dims_[v]; ++t) row[t] = p.coeff(t);
            table.push_back(std::move(row));
        }
        return table[e];
    }

    std::vector<UniPoly> mod_;
    std::vector<Rational> shift_;
    std::vector<int> dims_;
    long dim_ = 1;
    std::vector<std::vector<std::vector<Rational>>> rows_;
    std::vector<std::vector<std::vector<Rational>>> shift_rows_;
};

// Exact coordinates against a fixed list of spanning vectors. The echelon
// stores reduced, normalized rows, so the expansion of each stored row in
// the original vectors is tracked alongside it.
class SpanSolver {
public:
    bool add(const SparseVec& v) {
        std::vector<Rational> c;
        SparseVec r = ech_.reduce(v, &c);
        if (r.empty()) return false;
        size_t n = exprs_.size();
        c.resize(n);
        std::vector<Rational> expr(n + 1, Rational(0));
        expr[n] = Rational(1);
        for (size_t j = 0; j < n; ++j) {
            if (c[j].is_zero()) continue;
            for (size_t t = 0; t < exprs_[j].size(); ++t) expr[t] -= c[j] * exprs_[j][t];
        }
        Rational inv = r.front().second.inv();
        for (auto& t : expr) t = t * inv;
        ech_.insert(std::move(r), static_cast<int>(n));
        exprs_.push_back(std::move(expr));
        return true;
    }

    // Coordinates of z against the added vectors, or nullopt outside the span.
    std::optional<std::vector<Rational>> solve(const SparseVec& z) const {
        std::vector<Rational> s;
        SparseVec rem = ech_.reduce(z, &s);
        if (!rem.empty()) return std::nullopt;
        s.resize(exprs_.size());
        std::vector<Rational> out(exprs_.size(), Rational(0));
        for (size_t j = 0; j < exprs_.size(); ++j) {
            if (s[j].is_zero()) continue;
            for (size_t t = 0; t < exprs_[j].size(); ++t) out[t] += s[j] * exprs_[j][t];
        }
        return out;
    }

private:
    Echelon ech_;
    std::vector<std::vector<Rational>> exprs_;
};

AlgElt elt_sum(const AlgElt& a, const AlgElt& b) {
    AlgElt out = a;
    for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

FiniteAlgebra trivial_algebra(const std::string& label) {
    AlgElt unit{Rational(1)};
    return FiniteAlgebra({label}, {{unit}}, unit);
}

// Product of elementary symmetric polynomials of x_1..x_a given exponents in
// elementary coordinates.
MultiPoly elementary_monomial(const std::vector<std::string>& xvars,
                              const std::vector<int>& alphabet, const Exp& e) {
    MultiPoly out = MultiPoly::constant(xvars, Rational(1));
    for (size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) out = out * elem_sym(xvars, alphabet, static_cast<int>(i) + 1).pow(e[i]);
    return out;
}

int inversions(const std::vector<int>& w) {
    int inv = 0;
    for (size_t i = 0; i < w.size(); ++i)
        for (size_t j = i + 1; j < w.size(); ++j)
            if (w[i] > w[j]) ++inv;
    return inv;
}

} // namespace

GrassQuotientModel build_quotient_model(int N, int a, const RootMultiset& sigma) {
    check_shape(N, a, sigma);
    GrassQuotientModel qm;
    qm.N = N;
    qm.a = a;
    qm.sigma = sigma;
    qm.schur_shapes = partitions_in_box(a, N - a);
    if (a == 0) {
        qm.algebra = trivial_algebra("1");
        qm.schur_classes = {qm.algebra.unit()};
        return qm;
    }
    auto evars = make_vars(a, "e");
    std::vector<MultiPoly> gens;
    for (int k = N - a + 1; k <= N; ++k)
        gens.push_back(h_diff_in_elementary(evars, a, k, sigma));
    Ideal I(std::move(gens));
    qm.algebra = quotient_algebra(I);
    long expect = choose(N, a);
    if (qm.algebra.dim() != expect)
        throw CheckFailure("quotient has dimension " + std::to_string(qm.algebra.dim()) +
                           ", expected C(" + std::to_string(N) + "," + std::to_string(a) +
                           ") = " + std::to_string(expect));
    auto xvars = make_vars(a, "x");
    auto alph = full_alphabet(xvars);
    RatMat S(qm.algebra.dim(), static_cast<int>(qm.schur_shapes.size()));
    for (size_t c = 0; c < qm.schur_shapes.size(); ++c) {
        MultiPoly s = schur_sym(xvars, alph, qm.schur_shapes[c]);
        AlgElt v = qm.algebra.from_poly(symmetric_to_elementary(s, alph, evars));
        for (int r = 0; r < qm.algebra.dim(); ++r) S.at(r, static_cast<int>(c)) = v[r];
        qm.schur_classes.push_back(std::move(v));
    }
    if (rank(S) != static_cast<int>(qm.schur_shapes.size()))
        throw CheckFailure("Schur classes are linearly dependent");
    return qm;
}

AlgElt symmetric_class(const GrassQuotientModel& qm, const MultiPoly& f) {
    if (qm.a == 0) {
        Rational c(0);
        for (const auto& [e, coef] : f.terms()) {
            if (exp_degree(e) != 0)
                throw Error("nonconstant polynomial in a zero-variable model");
            c = coef;
        }
        return AlgElt{c};
    }
    if (static_cast<int>(f.vars().size()) != qm.a)
        throw Error("polynomial must live in x_1..x_a");
    auto evars = make_vars(qm.a, "e");
    return qm.algebra.from_poly(symmetric_to_elementary(f, full_alphabet(f.vars()), evars));
}

std::vector<Rational> schur_coords(const GrassQuotientModel& qm, const AlgElt& u) {
    int d = qm.algebra.dim();
    RatMat S(d, static_cast<int>(qm.schur_classes.size()));
    for (size_t c = 0; c < qm.schur_classes.size(); ++c)
        for (int r = 0; r < d; ++r) S.at(r, static_cast<int>(c)) = qm.schur_classes[c][r];
    auto y = solve(S, u);
    if (!y) throw CheckFailure("element does not lie in the span of the Schur classes");
    return *y;
}

ExteriorModel build_exterior_model(int N, int a, const RootMultiset& sigma) {
    check_shape(N, a, sigma);
    ExteriorModel em;
    em.N = N;
    em.a = a;
    em.sigma = sigma;
    if (a == 0) {
        em.wedge = {{}};
        em.realized = {SparseVec{{0, Rational(1)}}};
        em.dim = 1;
        return em;
    }
    UniPoly P = sigma.char_poly();
    TensorRing R(std::vector<UniPoly>(a, P), {});
    for (const auto& al : partitions_in_box(a, N - a)) {
        std::vector<int> tup(a);
        for (int i = 0; i < a; ++i) tup[i] = al.part(i) + a - 1 - i;
        std::vector<int> w(a);
        std::iota(w.begin(), w.end(), 0);
        std::map<long, Rational> acc;
        do {
            Exp e(a, 0);
            for (int j = 0; j < a; ++j) e[j] = tup[w[j]];
            acc[R.index_of(e)] += inversions(w) % 2 == 0 ? Rational(1) : Rational(-1);
        } while (std::next_permutation(w.begin(), w.end()));
        SparseVec v;
        for (const auto& [i, c] : acc)
            if (!c.is_zero()) v.emplace_back(static_cast<int>(i), c);
        em.wedge.push_back(std::move(tup));
        em.realized.push_back(std::move(v));
    }
    Echelon ech;
    int rk = 0;
    for (size_t k = 0; k < em.realized.size(); ++k)
        if (ech.insert(em.realized[k], static_cast<int>(k))) ++rk;
    em.dim = rk;
    if (em.dim != static_cast<int>(em.wedge.size()))
        throw CheckFailure("wedge monomials are linearly dependent in the tensor ring");
    return em;
}

FiniteAlgebra exterior_algebra(const ExteriorModel& em) {
    int d = static_cast<int>(em.wedge.size());
    std::vector<std::string> labels;
    for (const auto& tup : em.wedge) {
        std::string s = "w(";
        for (size_t i = 0; i < tup.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(tup[i]);
        }
        labels.push_back(s + ")");
    }
    if (em.a == 0) return trivial_algebra(labels[0]);
    UniPoly P = em.sigma.char_poly();
    TensorRing R(std::vector<UniPoly>(em.a, P), {});
    auto xvars = make_vars(em.a, "x");
    SparseVec delta = R.embed_plain(vandermonde(xvars, full_alphabet(xvars)));
    SpanSolver div;
    for (int k = 0; k < d; ++k)
        if (!div.add(R.mul(delta, em.realized[k])))
            throw CheckFailure("Vandermonde multiples of the wedge basis are dependent");
    std::vector<std::vector<AlgElt>> table(d, std::vector<AlgElt>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            SparseVec z = R.mul(em.realized[i], em.realized[j]);
            auto coeffs = div.solve(z);
            if (!coeffs)
                throw CheckFailure("wedge product " + labels[i] + " * " + labels[j] +
                                   " is not divisible by the Vandermonde class");
            table[i][j] = *coeffs;
            table[j][i] = std::move(*coeffs);
        }
    std::vector<int> rho(em.a);
    for (int i = 0; i < em.a; ++i) rho[i] = em.a - 1 - i;
    auto it = std::find(em.wedge.begin(), em.wedge.end(), rho);
    if (it == em.wedge.end()) throw CheckFailure("staircase wedge monomial missing");
    AlgElt unit(d);
    unit[static_cast<size_t>(it - em.wedge.begin())] = Rational(1);
    return FiniteAlgebra(std::move(labels), std::move(table), std::move(unit));
}

void models_agree(const GrassQuotientModel& qm, const ExteriorModel& em) {
    if (qm.N != em.N || qm.a != em.a || !(qm.sigma == em.sigma))
        throw Error("models describe different rings");
    FiniteAlgebra ext = exterior_algebra(em);
    int d = qm.algebra.dim();
    if (ext.dim() != d)
        throw CheckFailure("model dimensions differ: " + std::to_string(d) + " vs " +
                           std::to_string(ext.dim()));
    std::vector<AlgElt> basis(d);
    for (int i = 0; i < d; ++i) {
        basis[i] = AlgElt(d);
        basis[i][i] = Rational(1);
    }
    if (schur_coords(qm, qm.algebra.unit()) != ext.unit())
        throw CheckFailure("units differ under the wedge correspondence");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            AlgElt prod = qm.algebra.multiply(qm.schur_classes[i], qm.schur_classes[j]);
            if (schur_coords(qm, prod) != ext.multiply(basis[i], basis[j]))
                throw CheckFailure("structure constants differ at (" +
                                   qm.schur_shapes[i].str() + ", " +
                                   qm.schur_shapes[j].str() + ")");
        }
}

UniPoly crt_idempotent(const UniPoly& P, const Rational& lambda) {
    UniPoly lin({-lambda, Rational(1)});
    UniPoly rest = P;
    int m = 0;
    while (true) {
        auto [q, r] = rest.divmod(lin);
        if (!r.is_zero()) break;
        rest = q;
        ++m;
    }
    if (m == 0) throw Error(lambda.str() + " is not a root of the modulus");
    UniPoly local = lin.pow(m);
    auto [g, s, t] = UniPoly::ext_gcd(local, rest);
    (void)s;
    if (g.degree() != 0) throw CheckFailure("local factors of the modulus are not coprime");
    UniPoly e = (t * rest).scaled(g.coeff(0).inv()).mod(P);
    if (!((e * e).mod(P) == e)) throw CheckFailure("idempotent verification failed");
    return e;
}

std::vector<std::vector<int>> coset_transversal(const std::vector<int>& blocks) {
    int a = 0;
    for (int b : blocks) {
        if (b < 0) throw Error("negative block size");
        a += b;
    }
    if (a == 0) return {{}};
    std::vector<int> bid(a);
    {
        int pos = 0, id = 0;
        for (int b : blocks) {
            for (int i = 0; i < b; ++i) bid[pos++] = id;
            ++id;
        }
    }
    // Right cosets: w and h*w agree on i -> block(w(i)). Left cosets: w and
    // w*h agree on the image set of each block. Enumerate both keys per
    // permutation and keep the fewest-inversion member of each intersection.
    std::map<std::vector<int>, int> right_id;
    std::map<std::vector<std::vector<int>>, int> left_id;
    std::map<std::pair<int, int>, std::pair<int, std::vector<int>>> cell;
    std::vector<int> w(a);
    std::iota(w.begin(), w.end(), 0);
    do {
        std::vector<int> rkey(a);
        for (int i = 0; i < a; ++i) rkey[i] = bid[w[i]];
        std::vector<std::vector<int>> lkey(blocks.size());
        for (int i = 0; i < a; ++i) lkey[bid[i]].push_back(w[i]);
        for (auto& part : lkey) std::sort(part.begin(), part.end());
        int r = static_cast<int>(right_id.emplace(rkey, right_id.size()).first->second);
        int l = static_cast<int>(left_id.emplace(lkey, left_id.size()).first->second);
        int inv = inversions(w);
        auto it = cell.find({r, l});
        if (it == cell.end())
            cell.emplace(std::make_pair(r, l), std::make_pair(inv, w));
        else if (inv < it->second.first)
            it->second = {inv, w};
    } while (std::next_permutation(w.begin(), w.end()));
    int m = static_cast<int>(right_id.size());
    if (static_cast<int>(left_id.size()) != m)
        throw CheckFailure("left and right coset counts differ");
    // A common transversal corresponds to a perfect matching of right to
    // left cosets along nonempty intersections; one exists by Hall's
    // theorem since all cosets have the same size.
    std::vector<std::vector<int>> adj(m);
    for (const auto& [key, val] : cell) {
        (void)val;
        adj[key.first].push_back(key.second);
    }
    std::vector<int> match_l(m, -1), match_r(m, -1);
    std::function<bool(int, std::vector<char>&)> augment = [&](int r,
                                                               std::vector<char>& seen) {
        for (int l : adj[r]) {
            if (seen[l]) continue;
            seen[l] = 1;
            if (match_l[l] < 0 || augment(match_l[l], seen)) {
                match_l[l] = r;
                match_r[r] = l;
                return true;
            }
        }
        return false;
    };
    for (int r = 0; r < m; ++r) {
        std::vector<char> seen(m, 0);
        if (!augment(r, seen)) throw CheckFailure("no common coset transversal exists");
    }
    std::vector<std::vector<int>> T;
    for (int r = 0; r < m; ++r) T.push_back(cell.at({r, match_r[r]}).second);
    // Assert both transversal properties on the result.
    std::map<std::vector<int>, int> seen_r;
    std::map<std::vector<std::vector<int>>, int> seen_l;
    for (const auto& tau : T) {
        std::vector<int> rkey(a);
        for (int i = 0; i < a; ++i) rkey[i] = bid[tau[i]];
        std::vector<std::vector<int>> lkey(blocks.size());
        for (int i = 0; i < a; ++i) lkey[bid[i]].push_back(tau[i]);
        for (auto& part : lkey) std::sort(part.begin(), part.end());
        if (++seen_r[rkey] > 1) throw CheckFailure("set is not a right transversal");
        if (++seen_l[lkey] > 1) throw CheckFailure("set is not a left transversal");
    }
    return T;
}

MultiPoly idempotent_symmetric_rep(int a, const RootMultiset& sigma,
                                   const std::vector<int>& counts) {
    const auto& roots = sigma.distinct();
    if (counts.size() != roots.size()) throw Error("need one count per distinct root");
    int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total != a) throw Error("counts must sum to the number of variables");
    if (a == 0) throw Error("idempotent representative needs at least one variable");
    UniPoly P = sigma.char_poly();
    std::vector<UniPoly> idem;
    for (const auto& r : roots) idem.push_back(crt_idempotent(P, r));
    auto xvars = make_vars(a, "x");
    std::vector<int> arr;
    for (size_t j = 0; j < counts.size(); ++j)
        for (int t = 0; t < counts[j]; ++t) arr.push_back(static_cast<int>(j));
    MultiPoly out = MultiPoly::constant(xvars, Rational(0));
    do {
        MultiPoly term = MultiPoly::constant(xvars, Rational(1));
        for (int i = 0; i < a; ++i) term = term * idem[arr[i]].to_multipoly(xvars, i);
        out += term;
    } while (std::next_permutation(arr.begin(), arr.end()));
    return out;
}

IdempotentFamily idempotent_family(int N, int a, const RootMultiset& sigma) {
    IdempotentFamily fam;
    fam.model = build_quotient_model(N, a, sigma);
    fam.roots = sigma.distinct();
    UniPoly P = sigma.char_poly();
    for (const auto& r : fam.roots) fam.root_idempotents.push_back(crt_idempotent(P, r));
    fam.subsets = sigma.multisubsets(a);
    if (fam.subsets.empty()) throw CheckFailure("no multisubsets of the requested size");
    for (const auto& A : fam.subsets) {
        AlgElt u;
        if (a == 0) {
            fam.symmetric_reps.push_back(
                MultiPoly::constant(std::vector<std::string>{}, Rational(1)));
            u = fam.model.algebra.unit();
        } else {
            MultiPoly rep = idempotent_symmetric_rep(a, sigma, counts_against(sigma, A));
            u = symmetric_class(fam.model, rep);
            fam.symmetric_reps.push_back(std::move(rep));
        }
        if (fam.model.algebra.multiply(u, u) != u)
            throw CheckFailure("class of {" + A.str() + "} is not idempotent");
        fam.summand_dims.push_back(rank(fam.model.algebra.mult_operator(u)));
        fam.idempotents.push_back(std::move(u));
    }
    AlgElt total = fam.model.algebra.zero();
    for (size_t i = 0; i < fam.idempotents.size(); ++i) {
        total = elt_sum(total, fam.idempotents[i]);
        for (size_t j = 0; j < i; ++j) {
            AlgElt prod = fam.model.algebra.multiply(fam.idempotents[i], fam.idempotents[j]);
            if (prod != fam.model.algebra.zero())
                throw CheckFailure("idempotents of {" + fam.subsets[i].str() + "} and {" +
                                   fam.subsets[j].str() + "} are not orthogonal");
        }
    }
    if (total != fam.model.algebra.unit())
        throw CheckFailure("idempotent family does not sum to the unit");
    return fam;
}

DecompositionIso decomposition_iso(int N, int a, const RootMultiset& sigma) {
    DecompositionIso iso;
    iso.source = build_quotient_model(N, a, sigma);
    int d = iso.source.algebra.dim();
    const auto roots = sigma.distinct();
    const auto mults = sigma.multiplicities();
    int nb = static_cast<int>(roots.size());
    auto subsets = sigma.multisubsets(a);
    // Undeformed block models, cached per (multiplicity, count).
    std::map<std::pair<int, int>, GrassQuotientModel> cache;
    auto block_model = [&](int nu, int c) -> const GrassQuotientModel& {
        auto key = std::make_pair(nu, c);
        auto it = cache.find(key);
        if (it == cache.end()) {
            RootMultiset zero(std::vector<Rational>(nu, Rational(0)));
            it = cache.emplace(key, build_quotient_model(nu, c, zero)).first;
        }
        return it->second;
    };
    int row_offset = 0;
    for (const auto& A : subsets) {
        DecompositionSummand sm;
        sm.subset = A;
        sm.counts = counts_against(sigma, A);
        FiniteAlgebra target;
        bool first = true;
        for (int j = 0; j < nb; ++j) {
            const FiniteAlgebra& B = block_model(mults[j], sm.counts[j]).algebra;
            target = first ? B : tensor_algebra(target, B);
            first = false;
        }
        int dt = target.dim();
        sm.map = RatMat(dt, d);
        if (a == 0) {
            sm.map.at(0, 0) = Rational(1);
        } else {
            // The local ring in shifted coordinates: one variable per chosen
            // root copy, modulus w^{multiplicity}, shift by the root.
            std::vector<UniPoly> moduli;
            std::vector<Rational> shifts;
            std::vector<std::vector<int>> block_vars(nb);
            {
                int r = 0;
                for (int j = 0; j < nb; ++j)
                    for (int t = 0; t < sm.counts[j]; ++t) {
                        std::vector<Rational> pc(mults[j] + 1, Rational(0));
                        pc[mults[j]] = Rational(1);
                        moduli.push_back(UniPoly(std::move(pc)));
                        shifts.push_back(roots[j]);
                        block_vars[j].push_back(r++);
                    }
            }
            TensorRing W(std::move(moduli), std::move(shifts));
            auto wvars = make_vars(a, "w");
            auto xvars = make_vars(a, "x");
            // Target basis realized in the local ring, flat index matching
            // the tensor fold (later blocks least significant).
            MultiPoly delta_blocks = MultiPoly::constant(wvars, Rational(1));
            for (int j = 0; j < nb; ++j)
                if (sm.counts[j] > 1)
                    delta_blocks = delta_blocks * vandermonde(wvars, block_vars[j]);
            SparseVec delta_vec = W.embed_plain(delta_blocks);
            std::vector<SparseVec> beta(dt);
            SpanSolver coords_basis, divide_basis;
            {
                std::vector<int> idx(nb, 0);
                for (int k = 0; k < dt; ++k) {
                    int rem = k;
                    for (int j = nb - 1; j >= 0; --j) {
                        int dj = block_model(mults[j], sm.counts[j]).algebra.dim();
                        idx[j] = rem % dj;
                        rem /= dj;
                    }
                    MultiPoly b = MultiPoly::constant(wvars, Rational(1));
                    for (int j = 0; j < nb; ++j) {
                        if (sm.counts[j] == 0) continue;
                        const auto& bm = block_model(mults[j], sm.counts[j]);
                        b = b * elementary_monomial(wvars, block_vars[j],
                                                    bm.algebra.basis_exps()[idx[j]]);
                    }
                    beta[k] = W.embed_plain(b);
                    if (!coords_basis.add(beta[k]))
                        throw CheckFailure("target basis collapses in the local ring");
                    if (!divide_basis.add(W.mul(delta_vec, beta[k])))
                        throw CheckFailure("block Vandermonde multiples are dependent");
                }
            }
            // The unit correction: the cross-block Vandermonde inverts to the
            // element c with c * (cross part) = local unit; found linearly.
            MultiPoly cross = MultiPoly::constant(xvars, Rational(1));
            {
                std::vector<int> bid(a);
                int r = 0;
                for (int j = 0; j < nb; ++j)
                    for (int t = 0; t < sm.counts[j]; ++t) bid[r++] = j;
                for (int i = 0; i < a; ++i)
                    for (int j2 = i + 1; j2 < a; ++j2)
                        if (bid[i] != bid[j2])
                            cross = cross * (MultiPoly::variable(xvars, i) -
                                             MultiPoly::variable(xvars, j2));
            }
            SparseVec cinv = W.embed_shifted(cross);
            long D = W.dim();
            RatMat M(static_cast<int>(D), static_cast<int>(D));
            for (long t = 0; t < D; ++t) {
                SparseVec col = W.mul(cinv, SparseVec{{static_cast<int>(t), Rational(1)}});
                for (const auto& [i, c] : col) M.at(i, static_cast<int>(t)) = c;
            }
            std::vector<Rational> one(D);
            one[0] = Rational(1);
            auto y = solve(M, one);
            if (!y)
                throw CheckFailure("cross-block Vandermonde is not a unit of the local ring");
            SparseVec c_elt;
            for (long t = 0; t < D; ++t)
                if (!(*y)[t].is_zero()) c_elt.emplace_back(static_cast<int>(t), (*y)[t]);
            if (!(W.mul(c_elt, cinv) == SparseVec{{0, Rational(1)}}))
                throw CheckFailure("unit correction failed verification");
            // Column for each source basis monomial: multiply by the full
            // Vandermonde, pass to the local ring, divide by the block part,
            // correct by c, and read off target coordinates.
            MultiPoly delta_full = vandermonde(xvars, full_alphabet(xvars));
            for (int s = 0; s < d; ++s) {
                MultiPoly xs = elementary_monomial(xvars, full_alphabet(xvars),
                                                   iso.source.algebra.basis_exps()[s]);
                SparseVec z = W.embed_shifted(delta_full * xs);
                auto div = divide_basis.solve(z);
                if (!div)
                    throw CheckFailure("image is not divisible by the block Vandermonde");
                SparseVec y_elt;
                for (int k = 0; k < dt; ++k)
                    if (!(*div)[k].is_zero()) y_elt = sparse_axpy(y_elt, (*div)[k], beta[k]);
                SparseVec f = W.mul(c_elt, y_elt);
                auto out = coords_basis.solve(f);
                if (!out)
                    throw CheckFailure("image leaves the span of the target basis");
                for (int t = 0; t < dt; ++t) sm.map.at(t, s) = (*out)[t];
            }
        }
        // The summand map must be a unital algebra homomorphism.
        auto apply_map = [&](const AlgElt& u) {
            AlgElt out(dt);
            for (int s = 0; s < d; ++s) {
                if (u[s].is_zero()) continue;
                for (int t = 0; t < dt; ++t) out[t] += u[s] * sm.map.at(t, s);
            }
            return out;
        };
        if (apply_map(iso.source.algebra.unit()) != target.unit())
            throw CheckFailure("summand map of {" + A.str() + "} is not unital");
        std::vector<AlgElt> cols(d);
        for (int s = 0; s < d; ++s) {
            cols[s] = AlgElt(dt);
            for (int t = 0; t < dt; ++t) cols[s][t] = sm.map.at(t, s);
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) {
                AlgElt ei(d), ej(d);
                ei[i] = Rational(1);
                ej[j] = Rational(1);
                AlgElt lhs = target.multiply(cols[i], cols[j]);
                AlgElt rhs = apply_map(iso.source.algebra.multiply(ei, ej));
                if (lhs != rhs)
                    throw CheckFailure("summand map of {" + A.str() +
                                       "} is not multiplicative at basis pair (" +
                                       std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        sm.target = std::move(target);
        row_offset += dt;
        iso.summands.push_back(std::move(sm));
    }
    if (row_offset != d)
        throw CheckFailure("summand dimensions total " + std::to_string(row_offset) +
                           ", expected " + std::to_string(d));
    iso.forward = RatMat(d, d);
    {
        int off = 0;
        for (const auto& sm : iso.summands) {
            for (int t = 0; t < sm.map.rows(); ++t)
                for (int s = 0; s < d; ++s) iso.forward.at(off + t, s) = sm.map.at(t, s);
            off += sm.map.rows();
        }
    }
    auto inv = inverse(iso.forward);
    if (!inv) throw CheckFailure("decomposition map is not invertible");
    iso.inverse = std::move(*inv);
    return iso;
}

FiniteAlgebra splitter_algebra(const RootMultiset& sigma, const RootMultiset& A,
                               const RootMultiset& B, const RootMultiset& C) {
    int N = sigma.size(), a = A.size(), b = B.size();
    if (C.size() != a + b) throw Error("the big multisubset must have size |A| + |B|");
    if (a < 1 || b < 1) throw Error("both small multisubsets must be nonempty");
    if (a + b > N) throw Error("combined size exceeds the deformation multiset");
    std::vector<std::string> vars;
    for (int i = 1; i <= a + b; ++i) vars.push_back("E" + std::to_string(i));
    for (int i = 1; i <= a; ++i) vars.push_back("F" + std::to_string(i));
    for (int i = 1; i <= b; ++i) vars.push_back("G" + std::to_string(i));
    auto evars_c = make_vars(a + b, "E");
    auto evars_a = make_vars(a, "F");
    auto evars_b = make_vars(b, "G");
    std::vector<MultiPoly> gens;
    for (int k = N - (a + b) + 1; k <= N; ++k)
        gens.push_back(h_diff_in_elementary(evars_c, a + b, k, sigma).lift_to(vars));
    for (int k = N - a + 1; k <= N; ++k)
        gens.push_back(h_diff_in_elementary(evars_a, a, k, sigma).lift_to(vars));
    for (int k = N - b + 1; k <= N; ++k)
        gens.push_back(h_diff_in_elementary(evars_b, b, k, sigma).lift_to(vars));
    for (int i = 1; i <= a + b; ++i) {
        MultiPoly rel = MultiPoly::variable(vars, i - 1);
        for (int p = std::max(0, i - b); p <= std::min(a, i); ++p) {
            int q = i - p;
            MultiPoly term = MultiPoly::constant(vars, Rational(1));
            if (p > 0) term = term * MultiPoly::variable(vars, (a + b) + p - 1);
            if (q > 0) term = term * MultiPoly::variable(vars, (a + b) + a + q - 1);
            rel -= term;
        }
        gens.push_back(rel);
    }
    Ideal I(std::move(gens));
    FiniteAlgebra Q = quotient_algebra(I);
    auto cut_poly = [&](int n, const RootMultiset& M,
                        const std::vector<std::string>& evars) {
        auto xv = make_vars(n, "x");
        MultiPoly rep = idempotent_symmetric_rep(n, sigma, counts_against(sigma, M));
        return symmetric_to_elementary(rep, full_alphabet(xv), evars).lift_to(vars);
    };
    MultiPoly cut = cut_poly(a + b, C, evars_c) * cut_poly(a, A, evars_a) *
                    cut_poly(b, B, evars_b);
    AlgElt u = Q.from_poly(cut);
    return summand_algebra(Q, u).alg;
}

SplitUnitInverse split_unit_inverse(const RootMultiset& sigma, const RootMultiset& A,
                                    const RootMultiset& B) {
    int N = sigma.size(), a = A.size(), b = B.size();
    if (a < 1 || b < 1) throw Error("both multisubsets must be nonempty");
    if (a + b > N) throw Error("combined size exceeds the deformation multiset");
    GrassQuotientModel ma = build_quotient_model(N, a, sigma);
    GrassQuotientModel mb = build_quotient_model(N, b, sigma);
    AlgElt ua = symmetric_class(ma, idempotent_symmetric_rep(a, sigma, counts_against(sigma, A)));
    AlgElt ub = symmetric_class(mb, idempotent_symmetric_rep(b, sigma, counts_against(sigma, B)));
    Summand sa = summand_algebra(ma.algebra, ua);
    Summand sb = summand_algebra(mb.algebra, ub);
    SplitUnitInverse out;
    out.tensor = tensor_algebra(sa.alg, sb.alg);
    int da = sa.alg.dim(), db = sb.alg.dim();
    out.unit_elt = AlgElt(static_cast<size_t>(da) * db);
    auto class_index = [](const GrassQuotientModel& m, const Partition& p) {
        auto it = std::find(m.schur_shapes.begin(), m.schur_shapes.end(), p);
        if (it == m.schur_shapes.end()) throw Error("partition leaves the box");
        return static_cast<size_t>(it - m.schur_shapes.begin());
    };
    for (const auto& al : partitions_in_box(a, b)) {
        Partition partner = split_partner(al, a, b);
        AlgElt pa = sa.restrict_to(
            ma.algebra, ma.algebra.multiply(ua, ma.schur_classes[class_index(ma, al)]));
        AlgElt pb = sb.restrict_to(
            mb.algebra, mb.algebra.multiply(ub, mb.schur_classes[class_index(mb, partner)]));
        bool neg = (static_cast<long>(a) * b - al.size()) % 2 != 0;
        for (int i = 0; i < da; ++i) {
            if (pa[i].is_zero()) continue;
            for (int j = 0; j < db; ++j) {
                if (pb[j].is_zero()) continue;
                Rational c = pa[i] * pb[j];
                out.unit_elt[static_cast<size_t>(i) * db + j] += neg ? -c : c;
            }
        }
    }
    auto inv = algebra_inverse(out.tensor, out.unit_elt);
    if (!inv)
        throw Error("split unit is not invertible; the multisubsets must be disjoint");
    out.inverse = std::move(*inv);
    return out;
}

} // namespace dlh
