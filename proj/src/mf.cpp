#include "dlh/mf.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <utility>

#include "dlh/error.hpp"
#include "dlh/ideal.hpp"
#include "dlh/linalg.hpp"
#include "dlh/parallel.hpp"

namespace dlh {

namespace {

int popcount(long m) { return __builtin_popcountl(static_cast<unsigned long>(m)); }

// Re-express p (over its own list) over `vars`, sending p's variable i to
// vars[where[i]].
MultiPoly embed_poly(const MultiPoly& p, const std::vector<std::string>& vars,
                     const std::vector<int>& where) {
    MultiPoly out(vars);
    for (const auto& [e, c] : p.terms()) {
        Exp big(vars.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) big[where[i]] = e[i];
        out.add_term(big, c);
    }
    return out;
}

// Evaluate a polynomial at polynomial arguments, one per formal variable.
MultiPoly compose_poly(const MultiPoly& g, const std::vector<MultiPoly>& args) {
    if (args.empty()) throw Error("compose_poly needs arguments");
    const auto& vars = args[0].vars();
    MultiPoly out(vars);
    for (const auto& [e, c] : g.terms()) {
        MultiPoly t = MultiPoly::constant(vars, c);
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t *= args[i];
        out += t;
    }
    return out;
}

MultiPoly zero_like(const std::vector<std::string>& vars) {
    return MultiPoly::constant(vars, Rational(0));
}

} // namespace

// ---------------------------------------------------------------------------
// Potential
// ---------------------------------------------------------------------------

Potential Potential::make(const RootMultiset& sigma) {
    Potential pot;
    pot.sigma = sigma;
    pot.P = sigma.char_poly();
    pot.Q = pot.P.antiderivative().scaled(Rational(pot.P.degree() + 1));
    if (pot.Q.derivative() != pot.P.scaled(Rational(pot.P.degree() + 1)))
        throw CheckFailure("potential derivative mismatch");
    return pot;
}

MultiPoly Potential::on_single(const MultiPoly& arg) const {
    MultiPoly out = zero_like(arg.vars());
    MultiPoly p = MultiPoly::constant(arg.vars(), Rational(1));
    for (int i = 0; i <= Q.degree(); ++i) {
        if (!Q.coeff(i).is_zero()) out += p.scaled(Q.coeff(i));
        if (i < Q.degree()) p *= arg;
    }
    return out;
}

MultiPoly Potential::on_pair(const MultiPoly& e1, const MultiPoly& e2) const {
    // Power sums of a two-letter alphabet from its elementary symmetric
    // values: p_1 = e1, p_i = e1 p_{i-1} - e2 p_{i-2}. Q has no constant
    // term, so the i = 0 power sum never enters.
    const auto& vars = e1.vars();
    MultiPoly out = zero_like(vars);
    MultiPoly pprev = MultiPoly::constant(vars, Rational(2));
    MultiPoly pcur = e1;
    for (int i = 1; i <= Q.degree(); ++i) {
        if (!Q.coeff(i).is_zero()) out += pcur.scaled(Q.coeff(i));
        MultiPoly pnext = e1 * pcur - e2 * pprev;
        pprev = pcur;
        pcur = pnext;
    }
    return out;
}

MultiPoly Potential::saddle_entry(const std::vector<std::string>& vars, int xi, int yi) const {
    if (xi == yi) return Q.derivative().to_multipoly(vars, xi);
    MultiPoly x = MultiPoly::variable(vars, xi);
    MultiPoly y = MultiPoly::variable(vars, yi);
    return (on_single(x) - on_single(y)).exact_div(x - y);
}

std::array<MultiPoly, 2> Potential::pair_coeffs(const MultiPoly& a1, const MultiPoly& a2,
                                                const MultiPoly& b1, const MultiPoly& b2) const {
    // Symbolic divided differences along the coordinate path
    // (A1,A2) -> (B1,A2) -> (B1,B2) in a formal four-variable ring, composed
    // with the actual coordinate polynomials afterwards. This keeps the
    // division exact even when the arguments coincide.
    static const std::vector<std::string> g = {"pcA1", "pcA2", "pcB1", "pcB2"};
    MultiPoly A1 = MultiPoly::variable(g, 0), A2 = MultiPoly::variable(g, 1);
    MultiPoly B1 = MultiPoly::variable(g, 2), B2 = MultiPoly::variable(g, 3);
    MultiPoly qa = on_pair(A1, A2);
    MultiPoly qm = on_pair(B1, A2);
    MultiPoly qb = on_pair(B1, B2);
    MultiPoly u1 = (qa - qm).is_zero() ? zero_like(g) : (qa - qm).exact_div(A1 - B1);
    MultiPoly u2 = (qm - qb).is_zero() ? zero_like(g) : (qm - qb).exact_div(A2 - B2);
    std::vector<MultiPoly> args = {a1, a2, b1, b2};
    return {compose_poly(u1, args), compose_poly(u2, args)};
}

// ---------------------------------------------------------------------------
// Subset basis and Koszul factorizations
// ---------------------------------------------------------------------------

SubsetBasis SubsetBasis::make(int nrows) {
    SubsetBasis b;
    b.nrows = nrows;
    const long n = 1L << nrows;
    b.position.assign(n, -1);
    for (long m = 0; m < n; ++m) {
        if (popcount(m) % 2 == 0) {
            b.position[m] = static_cast<long>(b.even.size());
            b.even.push_back(m);
        } else {
            b.position[m] = static_cast<long>(b.odd.size());
            b.odd.push_back(m);
        }
    }
    return b;
}

int SubsetBasis::insert_sign(long mask, int r) {
    return popcount(mask & ((1L << r) - 1)) % 2 == 0 ? 1 : -1;
}

MultiPoly KoszulMF::potential() const {
    MultiPoly w = zero_like(vars);
    for (const auto& row : rows) w += row.a * row.b;
    return w;
}

namespace {

// Differential on the full subset basis, masks in increasing order.
PolyMat full_differential(const KoszulMF& m) {
    const int R = m.nrows();
    const long n = 1L << R;
    PolyMat D(static_cast<int>(n), static_cast<int>(n), m.vars);
    for (long S = 0; S < n; ++S)
        for (int r = 0; r < R; ++r) {
            const Rational sg(SubsetBasis::insert_sign(S, r));
            if (!((S >> r) & 1L))
                D.at(static_cast<int>(S | (1L << r)), static_cast<int>(S)) +=
                    m.rows[r].a.scaled(sg);
            else
                D.at(static_cast<int>(S & ~(1L << r)), static_cast<int>(S)) +=
                    m.rows[r].b.scaled(sg);
        }
    return D;
}

} // namespace

TwoPeriodicComplex KoszulMF::two_periodic() const {
    SubsetBasis b = SubsetBasis::make(nrows());
    PolyMat D = full_differential(*this);
    TwoPeriodicComplex tp;
    tp.vars = vars;
    tp.d0 = PolyMat(static_cast<int>(b.odd.size()), static_cast<int>(b.even.size()), vars);
    tp.d1 = PolyMat(static_cast<int>(b.even.size()), static_cast<int>(b.odd.size()), vars);
    for (size_t j = 0; j < b.even.size(); ++j)
        for (size_t i = 0; i < b.odd.size(); ++i)
            tp.d0.at(static_cast<int>(i), static_cast<int>(j)) =
                D.at(static_cast<int>(b.odd[i]), static_cast<int>(b.even[j]));
    for (size_t j = 0; j < b.odd.size(); ++j)
        for (size_t i = 0; i < b.even.size(); ++i)
            tp.d1.at(static_cast<int>(i), static_cast<int>(j)) =
                D.at(static_cast<int>(b.even[i]), static_cast<int>(b.odd[j]));
    return tp;
}

void TwoPeriodicComplex::verify_potential(const MultiPoly& w) const {
    PolyMat p10 = d1 * d0;
    PolyMat p01 = d0 * d1;
    const MultiPoly zero = zero_like(vars);
    for (int i = 0; i < p10.rows(); ++i)
        for (int j = 0; j < p10.cols(); ++j)
            if (p10.at(i, j) != (i == j ? w : zero))
                throw CheckFailure("two-periodic square is not the potential (even side)");
    for (int i = 0; i < p01.rows(); ++i)
        for (int j = 0; j < p01.cols(); ++j)
            if (p01.at(i, j) != (i == j ? w : zero))
                throw CheckFailure("two-periodic square is not the potential (odd side)");
}

KoszulMF KoszulMF::tensor(const KoszulMF& x, const KoszulMF& y) {
    if (x.vars != y.vars) throw VariableMismatch("tensor factors over different variables");
    KoszulMF out = x;
    out.rows.insert(out.rows.end(), y.rows.begin(), y.rows.end());
    return out;
}

bool is_chain_map(const MFMorphism& f, const TwoPeriodicComplex& src,
                  const TwoPeriodicComplex& dst) {
    if (f.odd) throw Error("chain-map test implemented for even morphisms");
    return dst.d0 * f.f0 == f.f1 * src.d0 && dst.d1 * f.f1 == f.f0 * src.d1;
}

// ---------------------------------------------------------------------------
// Bounded-degree linear ansatz
// ---------------------------------------------------------------------------

namespace {

void fill_monomials(std::vector<Exp>& out, Exp& cur, int pos, int left) {
    if (pos == static_cast<int>(cur.size())) {
        out.push_back(cur);
        return;
    }
    for (int d = 0; d <= left; ++d) {
        cur[pos] = d;
        fill_monomials(out, cur, pos + 1, left - d);
    }
    cur[pos] = 0;
}

// Unknown polynomials of bounded total degree, linear equations between
// polynomial combinations of them, solved exactly over Q.
struct Ansatz {
    std::vector<std::string> vars;
    std::vector<Exp> monos;
    int nunknown = 0;
    std::vector<std::map<int, Rational>> lhs; // sparse rows over coefficient slots
    std::vector<Rational> rhs;

    Ansatz(std::vector<std::string> v, int degree_bound) : vars(std::move(v)) {
        Exp cur(vars.size(), 0);
        fill_monomials(monos, cur, 0, degree_bound);
    }

    int add_unknown() { return nunknown++; }
    int slot(int u, int m) const { return u * static_cast<int>(monos.size()) + m; }

    // sum_k coeff_k * U_{id_k} + constant == 0 as polynomials.
    void add_equation(const std::vector<std::pair<MultiPoly, int>>& terms,
                      const MultiPoly& constant) {
        std::map<Exp, std::map<int, Rational>, GrevlexLess> rows;
        for (const auto& [coeff, u] : terms)
            for (const auto& [ec, cc] : coeff.terms())
                for (size_t m = 0; m < monos.size(); ++m) {
                    Exp prod = exp_add(ec, monos[m]);
                    Rational& cell = rows[prod][slot(u, static_cast<int>(m))];
                    cell += cc;
                }
        std::map<Exp, Rational, GrevlexLess> consts;
        for (const auto& [e, c] : constant.terms()) {
            rows[e];
            consts[e] = c;
        }
        for (auto& [e, row] : rows) {
            for (auto it = row.begin(); it != row.end();)
                it = it->second.is_zero() ? row.erase(it) : std::next(it);
            auto itc = consts.find(e);
            Rational c = itc == consts.end() ? Rational(0) : itc->second;
            if (row.empty() && c.is_zero()) continue;
            lhs.push_back(row);
            rhs.push_back(-c);
        }
    }

    std::optional<std::vector<MultiPoly>> solve() const {
        const int ncols = nunknown * static_cast<int>(monos.size());
        RatMat A(static_cast<int>(lhs.size()), ncols);
        std::vector<Rational> b(lhs.size());
        for (size_t i = 0; i < lhs.size(); ++i) {
            for (const auto& [j, c] : lhs[i]) A.at(static_cast<int>(i), j) = c;
            b[i] = rhs[i];
        }
        auto x = dlh::solve(A, b);
        if (!x) return std::nullopt;
        std::vector<MultiPoly> out;
        out.reserve(nunknown);
        for (int u = 0; u < nunknown; ++u) {
            MultiPoly p(vars);
            for (size_t m = 0; m < monos.size(); ++m)
                p.add_term(monos[m], (*x)[slot(u, static_cast<int>(m))]);
            out.push_back(p);
        }
        return out;
    }
};

} // namespace

std::optional<std::pair<PolyMat, PolyMat>> homotopy_between(
    const MFMorphism& F, const MFMorphism& G, const TwoPeriodicComplex& src,
    const TwoPeriodicComplex& dst, int degree_bound) {
    if (F.odd || G.odd) throw Error("homotopy test implemented for even morphisms");
    const int s0 = src.d0.cols(), s1 = src.d1.cols();
    const int t0 = dst.d0.cols(), t1 = dst.d1.cols();
    for (int D = 0; D <= degree_bound; ++D) {
        Ansatz az(src.vars, D);
        std::vector<std::vector<int>> h0(t1, std::vector<int>(s0)); // M0 -> M1'
        std::vector<std::vector<int>> h1(t0, std::vector<int>(s1)); // M1 -> M0'
        for (auto& r : h0)
            for (auto& u : r) u = az.add_unknown();
        for (auto& r : h1)
            for (auto& u : r) u = az.add_unknown();
        // F0 - G0 = d1' h0 + h1 d0 and F1 - G1 = d0' h1 + h0 d1.
        for (int i = 0; i < t0; ++i)
            for (int j = 0; j < s0; ++j) {
                std::vector<std::pair<MultiPoly, int>> terms;
                for (int k = 0; k < t1; ++k)
                    if (!dst.d1.at(i, k).is_zero()) terms.push_back({dst.d1.at(i, k), h0[k][j]});
                for (int l = 0; l < s1; ++l)
                    if (!src.d0.at(l, j).is_zero()) terms.push_back({src.d0.at(l, j), h1[i][l]});
                az.add_equation(terms, G.f0.at(i, j) - F.f0.at(i, j));
            }
        for (int i = 0; i < t1; ++i)
            for (int j = 0; j < s1; ++j) {
                std::vector<std::pair<MultiPoly, int>> terms;
                for (int k = 0; k < t0; ++k)
                    if (!dst.d0.at(i, k).is_zero()) terms.push_back({dst.d0.at(i, k), h1[k][j]});
                for (int l = 0; l < s0; ++l)
                    if (!src.d1.at(l, j).is_zero()) terms.push_back({src.d1.at(l, j), h0[i][l]});
                az.add_equation(terms, G.f1.at(i, j) - F.f1.at(i, j));
            }
        auto sol = az.solve();
        if (!sol) continue;
        PolyMat H0(t1, s0, src.vars), H1(t0, s1, src.vars);
        for (int i = 0; i < t1; ++i)
            for (int j = 0; j < s0; ++j) H0.at(i, j) = (*sol)[h0[i][j]];
        for (int i = 0; i < t0; ++i)
            for (int j = 0; j < s1; ++j) H1.at(i, j) = (*sol)[h1[i][j]];
        if (dst.d1 * H0 + H1 * src.d0 != F.f0 - G.f0 ||
            dst.d0 * H1 + H0 * src.d1 != F.f1 - G.f1)
            throw CheckFailure("homotopy reconstruction failed");
        return std::make_pair(H0, H1);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Web compiler
// ---------------------------------------------------------------------------

KoszulMF web_to_mf(const Web& w, const RootMultiset& sigma) {
    w.validate();
    Potential pot = Potential::make(sigma);
    for (const auto& e : w.edges)
        if (e.label < 1 || e.label > 2)
            throw Error("web compiler handles labels 1 and 2 only");

    // One alphabet per edge; a boundary-to-boundary edge gets separate
    // bottom and top alphabets joined by identity rows.
    std::vector<std::string> vars;
    std::vector<int> bot_at(w.edges.size(), -1), top_at(w.edges.size(), -1);
    std::vector<bool> through(w.edges.size(), false);
    for (size_t e = 0; e < w.edges.size(); ++e) {
        const auto& ed = w.edges[e];
        through[e] = ed.tail == -1 && ed.head == -1;
        bot_at[e] = static_cast<int>(vars.size());
        const std::string id = std::to_string(e);
        if (ed.label == 1)
            vars.push_back("x" + id);
        else {
            vars.push_back("s" + id + "a");
            vars.push_back("s" + id + "b");
        }
        if (through[e]) {
            top_at[e] = static_cast<int>(vars.size());
            if (ed.label == 1)
                vars.push_back("y" + id);
            else {
                vars.push_back("t" + id + "a");
                vars.push_back("t" + id + "b");
            }
        }
    }

    // Q of the alphabet of edge e (top side for through edges when asked).
    auto edge_q = [&](int e, bool top) {
        const int base = top && through[e] ? top_at[e] : bot_at[e];
        if (w.edges[e].label == 1)
            return pot.on_single(MultiPoly::variable(vars, base));
        return pot.on_pair(MultiPoly::variable(vars, base),
                           MultiPoly::variable(vars, base + 1));
    };

    // Elementary coordinates of the union of the edges on one vertex side.
    auto union_coords = [&](const std::vector<int>& side) -> std::pair<MultiPoly, MultiPoly> {
        if (side.size() == 1 && w.edges[side[0]].label == 2)
            return {MultiPoly::variable(vars, bot_at[side[0]]),
                    MultiPoly::variable(vars, bot_at[side[0]] + 1)};
        if (side.size() == 2 && w.edges[side[0]].label == 1 && w.edges[side[1]].label == 1) {
            MultiPoly u = MultiPoly::variable(vars, bot_at[side[0]]);
            MultiPoly v = MultiPoly::variable(vars, bot_at[side[1]]);
            return {u + v, u * v};
        }
        throw CheckFailure("vertex side does not total label 2");
    };

    KoszulMF out;
    out.vars = vars;
    for (size_t v = 0; v < w.vertices.size(); ++v) {
        std::vector<int> in, outgoing;
        for (size_t e = 0; e < w.edges.size(); ++e) {
            if (w.edges[e].head == static_cast<int>(v)) in.push_back(static_cast<int>(e));
            if (w.edges[e].tail == static_cast<int>(v)) outgoing.push_back(static_cast<int>(e));
        }
        auto [a1, a2] = union_coords(in);
        auto [b1, b2] = union_coords(outgoing);
        auto U = pot.pair_coeffs(a1, a2, b1, b2);
        out.rows.push_back({U[0], a1 - b1});
        out.rows.push_back({U[1], a2 - b2});
    }
    for (size_t e = 0; e < w.edges.size(); ++e) {
        if (!through[e]) continue;
        if (w.edges[e].label == 1) {
            out.rows.push_back({pot.saddle_entry(vars, bot_at[e], top_at[e]),
                                MultiPoly::variable(vars, bot_at[e]) -
                                    MultiPoly::variable(vars, top_at[e])});
        } else {
            MultiPoly s1 = MultiPoly::variable(vars, bot_at[e]);
            MultiPoly s2 = MultiPoly::variable(vars, bot_at[e] + 1);
            MultiPoly t1 = MultiPoly::variable(vars, top_at[e]);
            MultiPoly t2 = MultiPoly::variable(vars, top_at[e] + 1);
            auto U = pot.pair_coeffs(s1, s2, t1, t2);
            out.rows.push_back({U[0], s1 - t1});
            out.rows.push_back({U[1], s2 - t2});
        }
    }

    // The total potential must be Q(domain) - Q(codomain).
    MultiPoly expected = zero_like(vars);
    for (int e : w.domain) expected += edge_q(e, false);
    for (int e : w.codomain) expected -= edge_q(e, true);
    if (out.potential() != expected) throw CheckFailure("web potential mismatch");
    return out;
}

// ---------------------------------------------------------------------------
// Crossing complexes
// ---------------------------------------------------------------------------

namespace {

// Even morphism src -> dst between two-row factorizations lifting the coset
// map 1 -> coset_target between the quotients by the second entries: the
// chain-map equations hold exactly, and the empty-subset row of f0 agrees
// with (coset_target, 0) modulo the destination's second entries, with the
// coset multipliers solved alongside. The ansatz degree increases until the
// system becomes solvable.
MFMorphism solve_lift(const KoszulMF& src, const KoszulMF& dst, const MultiPoly& coset_target,
                      int max_degree, int* degree_used) {
    TwoPeriodicComplex S = src.two_periodic(), T = dst.two_periodic();
    const MultiPoly b0 = dst.rows[0].b, b1 = dst.rows[1].b;
    const MultiPoly one = MultiPoly::constant(src.vars, Rational(1));
    for (int D = 0; D <= max_degree; ++D) {
        Ansatz az(src.vars, D);
        int c0[2][2], c1[2][2], mu[4];
        for (auto& r : c0)
            for (auto& u : r) u = az.add_unknown();
        for (auto& r : c1)
            for (auto& u : r) u = az.add_unknown();
        for (auto& u : mu) u = az.add_unknown();
        // Chain equations: d0' f0 == f1 d0 and d1' f1 == f0 d1, entrywise.
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                std::vector<std::pair<MultiPoly, int>> terms;
                for (int k = 0; k < 2; ++k) {
                    if (!T.d0.at(i, k).is_zero()) terms.push_back({T.d0.at(i, k), c0[k][j]});
                    if (!S.d0.at(k, j).is_zero()) terms.push_back({-S.d0.at(k, j), c1[i][k]});
                }
                az.add_equation(terms, zero_like(src.vars));
            }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                std::vector<std::pair<MultiPoly, int>> terms;
                for (int k = 0; k < 2; ++k) {
                    if (!T.d1.at(i, k).is_zero()) terms.push_back({T.d1.at(i, k), c1[k][j]});
                    if (!S.d1.at(k, j).is_zero()) terms.push_back({-S.d1.at(k, j), c0[i][k]});
                }
                az.add_equation(terms, zero_like(src.vars));
            }
        // Coset conditions on the empty-subset row of the even block; the
        // even basis lists the empty mask first.
        az.add_equation({{one, c0[0][0]}, {-b0, mu[0]}, {-b1, mu[1]}}, -coset_target);
        az.add_equation({{one, c0[0][1]}, {-b0, mu[2]}, {-b1, mu[3]}}, zero_like(src.vars));
        auto sol = az.solve();
        if (!sol) continue;
        MFMorphism chi;
        chi.f0 = PolyMat(2, 2, src.vars);
        chi.f1 = PolyMat(2, 2, src.vars);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                chi.f0.at(i, j) = (*sol)[c0[i][j]];
                chi.f1.at(i, j) = (*sol)[c1[i][j]];
            }
        if (!is_chain_map(chi, S, T)) throw CheckFailure("crossing lift is not a chain map");
        if (chi.f0.at(0, 0) - coset_target != (*sol)[mu[0]] * b0 + (*sol)[mu[1]] * b1 ||
            chi.f0.at(0, 1) != (*sol)[mu[2]] * b0 + (*sol)[mu[3]] * b1)
            throw CheckFailure("crossing lift misses its coset target");
        if (degree_used) *degree_used = D;
        return chi;
    }
    throw CheckFailure("crossing lift ansatz exhausted at degree " + std::to_string(max_degree));
}

} // namespace

CrossingMF crossing_mf_complex(int sign, const RootMultiset& sigma) {
    if (sign != 1 && sign != -1) throw Error("crossing sign must be +1 or -1");
    Potential pot = Potential::make(sigma);
    CrossingMF c;
    c.sign = sign;
    c.vars = {"x1", "x2", "y1", "y2"};
    MultiPoly x1 = MultiPoly::variable(c.vars, 0), x2 = MultiPoly::variable(c.vars, 1);
    MultiPoly y1 = MultiPoly::variable(c.vars, 2), y2 = MultiPoly::variable(c.vars, 3);
    c.oriented.vars = c.vars;
    c.oriented.rows.push_back({pot.saddle_entry(c.vars, 0, 2), x1 - y1});
    c.oriented.rows.push_back({pot.saddle_entry(c.vars, 1, 3), x2 - y2});
    c.wide.vars = c.vars;
    auto U = pot.pair_coeffs(x1 + x2, x1 * x2, y1 + y2, y1 * y2);
    c.wide.rows.push_back({U[0], x1 + x2 - y1 - y2});
    c.wide.rows.push_back({U[1], x1 * x2 - y1 * y2});
    if (c.oriented.potential() != c.wide.potential())
        throw CheckFailure("crossing resolutions disagree on the potential");
    const int maxd = 2 * pot.N();
    if (sign > 0)
        c.chi = solve_lift(c.oriented, c.wide, y1 - x2, maxd, &c.chi_degree);
    else
        c.chi = solve_lift(c.wide, c.oriented, MultiPoly::constant(c.vars, Rational(1)), maxd,
                           &c.chi_degree);
    return c;
}

// ---------------------------------------------------------------------------
// Variable exclusion
// ---------------------------------------------------------------------------

namespace {

long mask_insert(long m, int r) { return ((m >> r) << (r + 1)) | (m & ((1L << r) - 1)); }

// (g - g[x:=f]) / (x - f); zero when g is x-free.
MultiPoly koszul_quotient(const MultiPoly& g, int var, const MultiPoly& f,
                          const MultiPoly& xminusf) {
    MultiPoly diff = g - g.substitute(var, f);
    if (diff.is_zero()) return diff;
    return diff.exact_div(xminusf);
}

PolyMat substitute_entries(const PolyMat& m, int var, const MultiPoly& f) {
    PolyMat out(m.rows(), m.cols(), m.vars());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_zero()) out.at(i, j) = m.at(i, j).substitute(var, f);
    return out;
}

// Keep only the rows whose masks avoid row bit r, reindexed densely.
PolyMat project_rows(const PolyMat& m, int nrows_before, int r) {
    const long nred = 1L << (nrows_before - 1);
    PolyMat out(static_cast<int>(nred), m.cols(), m.vars());
    for (long s = 0; s < nred; ++s) {
        const long old = mask_insert(s, r);
        for (int j = 0; j < m.cols(); ++j)
            out.at(static_cast<int>(s), j) = m.at(static_cast<int>(old), j);
    }
    return out;
}

} // namespace

bool exclusion_candidate(const KoszulMF& m, int r, int* var_out) {
    const MultiPoly& b = m.rows[r].b;
    if (b.is_zero()) return false;
    // The contraction is only a homotopy equivalence when the total
    // potential does not involve the excluded variable.
    const MultiPoly w = m.potential();
    for (int x = 0; x < b.nvars(); ++x) {
        bool in_potential = false;
        for (const auto& [e, c] : w.terms()) {
            (void)c;
            if (e[x] > 0) {
                in_potential = true;
                break;
            }
        }
        if (in_potential) continue;
        int hits = 0;
        bool clean = true;
        for (const auto& [e, c] : b.terms()) {
            (void)c;
            if (e[x] == 0) continue;
            ++hits;
            if (e[x] != 1 || exp_degree(e) != 1) clean = false;
        }
        if (hits == 1 && clean) {
            if (var_out) *var_out = x;
            return true;
        }
    }
    return false;
}

ExclusionStep exclude_row(KoszulMF& m, int r) {
    int x = -1;
    if (r < 0 || r >= m.nrows() || !exclusion_candidate(m, r, &x))
        throw CheckFailure("row is not excludable");
    const int R = m.nrows();
    const MultiPoly b = m.rows[r].b;
    Exp unit(m.vars.size(), 0);
    unit[x] = 1;
    const Rational c = b.coeff(unit);
    // b = c (x - f) with f free of x.
    MultiPoly rest = b;
    rest.add_term(unit, -c);
    MultiPoly f = rest.scaled(Rational(-1) / c);
    MultiPoly xminusf = MultiPoly::variable(m.vars, x) - f;

    ExclusionStep step;
    step.row = r;
    step.var = x;
    step.f = f;
    step.unit = c;

    // Include map: identity on r-free masks plus one correction into the
    // deleted direction per remaining row.
    const long nold = 1L << R, nred = 1L << (R - 1);
    step.include = PolyMat(static_cast<int>(nold), static_cast<int>(nred), m.vars);
    for (long s = 0; s < nred; ++s) {
        const long emb = mask_insert(s, r);
        step.include.at(static_cast<int>(emb), static_cast<int>(s)) =
            MultiPoly::constant(m.vars, Rational(1));
        for (int k = 0; k < R; ++k) {
            if (k == r) continue;
            if (!((emb >> k) & 1L)) {
                MultiPoly q = koszul_quotient(m.rows[k].a, x, f, xminusf);
                if (q.is_zero()) continue;
                const long t = emb | (1L << k) | (1L << r);
                const Rational sg(SubsetBasis::insert_sign(emb, k) *
                                  SubsetBasis::insert_sign(emb | (1L << k), r));
                step.include.at(static_cast<int>(t), static_cast<int>(s)) -= q.scaled(sg / c);
            } else {
                MultiPoly q = koszul_quotient(m.rows[k].b, x, f, xminusf);
                if (q.is_zero()) continue;
                const long base = emb & ~(1L << k);
                const long t = base | (1L << r);
                const Rational sg(SubsetBasis::insert_sign(base, k) *
                                  SubsetBasis::insert_sign(base, r));
                step.include.at(static_cast<int>(t), static_cast<int>(s)) -= q.scaled(sg / c);
            }
        }
    }

    PolyMat d_old = full_differential(m);
    for (auto& row : m.rows) {
        row.a = row.a.substitute(x, f);
        row.b = row.b.substitute(x, f);
    }
    m.rows.erase(m.rows.begin() + r);
    PolyMat d_new = full_differential(m);

    // Transport identities: p i = id and d i = i d'.
    PolyMat pi = project_rows(substitute_entries(step.include, x, f), R, r);
    if (pi != PolyMat::identity(static_cast<int>(nred), m.vars))
        throw CheckFailure("exclusion transport: p i != id");
    if (d_old * step.include != step.include * d_new)
        throw CheckFailure("exclusion transport: include is not a chain map");
    return step;
}

ReducedMF exclude_all(KoszulMF m, bool reverse_scan) {
    ReducedMF out;
    for (;;) {
        int found = -1;
        const int R = m.nrows();
        for (int k = 0; k < R; ++k) {
            const int r = reverse_scan ? R - 1 - k : k;
            if (exclusion_candidate(m, r, nullptr)) {
                found = r;
                break;
            }
        }
        if (found < 0) break;
        out.steps.push_back(exclude_row(m, found));
    }
    out.mf = std::move(m);
    return out;
}

namespace {

// chi' = p_dst ... p_dst chi i_src ... i_src on the full subset bases.
PolyMat transport_full(PolyMat chi_full, const std::vector<ExclusionStep>& src_steps,
                       const std::vector<ExclusionStep>& dst_steps, int dst_rows_before) {
    for (const auto& s : src_steps) chi_full = chi_full * s.include;
    int rows = dst_rows_before;
    for (const auto& s : dst_steps) {
        chi_full = project_rows(substitute_entries(chi_full, s.var, s.f), rows, s.row);
        --rows;
    }
    return chi_full;
}

} // namespace

MFMorphism transport_morphism(const MFMorphism& chi, const ReducedMF& src,
                              const ReducedMF& dst) {
    if (chi.odd) throw Error("transport implemented for even morphisms");
    const int Rs = src.mf.nrows() + static_cast<int>(src.steps.size());
    const int Rd = dst.mf.nrows() + static_cast<int>(dst.steps.size());
    SubsetBasis bs = SubsetBasis::make(Rs), bd = SubsetBasis::make(Rd);
    PolyMat full(static_cast<int>(1L << Rd), static_cast<int>(1L << Rs), src.mf.vars);
    for (size_t j = 0; j < bs.even.size(); ++j)
        for (size_t i = 0; i < bd.even.size(); ++i)
            full.at(static_cast<int>(bd.even[i]), static_cast<int>(bs.even[j])) =
                chi.f0.at(static_cast<int>(i), static_cast<int>(j));
    for (size_t j = 0; j < bs.odd.size(); ++j)
        for (size_t i = 0; i < bd.odd.size(); ++i)
            full.at(static_cast<int>(bd.odd[i]), static_cast<int>(bs.odd[j])) =
                chi.f1.at(static_cast<int>(i), static_cast<int>(j));
    PolyMat red = transport_full(std::move(full), src.steps, dst.steps, Rd);
    SubsetBasis rs = SubsetBasis::make(src.mf.nrows()), rd = SubsetBasis::make(dst.mf.nrows());
    MFMorphism out;
    out.f0 = PolyMat(static_cast<int>(rd.even.size()), static_cast<int>(rs.even.size()),
                     src.mf.vars);
    out.f1 = PolyMat(static_cast<int>(rd.odd.size()), static_cast<int>(rs.odd.size()),
                     src.mf.vars);
    for (size_t j = 0; j < rs.even.size(); ++j)
        for (size_t i = 0; i < rd.even.size(); ++i)
            out.f0.at(static_cast<int>(i), static_cast<int>(j)) =
                red.at(static_cast<int>(rd.even[i]), static_cast<int>(rs.even[j]));
    for (size_t j = 0; j < rs.odd.size(); ++j)
        for (size_t i = 0; i < rd.odd.size(); ++i)
            out.f1.at(static_cast<int>(i), static_cast<int>(j)) =
                red.at(static_cast<int>(rd.odd[i]), static_cast<int>(rs.odd[j]));
    return out;
}

// ---------------------------------------------------------------------------
// Free-module Groebner tools
// ---------------------------------------------------------------------------

namespace {

struct ModLT {
    int pos = -1;
    Exp e;
};

// Term-over-position: grevlex on the monomial first, lower position breaks
// ties.
std::optional<ModLT> mod_leading(const ModVec& v) {
    GrevlexLess less;
    std::optional<ModLT> best;
    for (size_t p = 0; p < v.size(); ++p) {
        if (v[p].is_zero()) continue;
        const Exp& e = v[p].leading_exp();
        if (!best || less(best->e, e)) best = ModLT{static_cast<int>(p), e};
    }
    return best;
}

bool mv_zero(const ModVec& v) {
    for (const auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

void mv_axpy(ModVec& v, const Exp& mono, const Rational& c, const ModVec& g) {
    for (size_t p = 0; p < v.size(); ++p)
        if (!g[p].is_zero()) v[p] += g[p].mul_monomial(mono, c);
}

// Full normal form; optionally tracks the representation over the reducers'
// own representations.
ModVec mod_reduce(ModVec v, const std::vector<ModVec>& basis,
                  const std::vector<ModVec>* basis_reps = nullptr, ModVec* rep = nullptr) {
    if (v.empty()) return v;
    const auto& vars = v[0].vars();
    ModVec done(v.size(), MultiPoly::constant(vars, Rational(0)));
    while (auto lt = mod_leading(v)) {
        bool reduced = false;
        for (size_t g = 0; g < basis.size(); ++g) {
            auto glt = mod_leading(basis[g]);
            if (!glt || glt->pos != lt->pos || !exp_divides(glt->e, lt->e)) continue;
            const Rational c = v[lt->pos].coeff(lt->e) / basis[g][glt->pos].coeff(glt->e);
            const Exp mono = exp_sub(lt->e, glt->e);
            mv_axpy(v, mono, -c, basis[g]);
            if (rep && basis_reps) mv_axpy(*rep, mono, -c, (*basis_reps)[g]);
            reduced = true;
            break;
        }
        if (!reduced) {
            const Rational c = v[lt->pos].coeff(lt->e);
            done[lt->pos].add_term(lt->e, c);
            v[lt->pos].add_term(lt->e, -c);
        }
    }
    return done;
}

struct ModuleBasis {
    std::vector<ModVec> elts;
    std::vector<ModVec> reps;     // over the original generators, when tracked
    std::vector<ModVec> syzygies; // representations that reduced to zero
};

// Buchberger over the free module. With tracking on, the original
// generators are all retained, every same-position pair is processed, and
// each zero reduction's representation is a syzygy; together they generate
// the full syzygy module of the original list.
ModuleBasis module_buchberger(const std::vector<ModVec>& gens,
                              const std::vector<std::string>& vars, int npos, bool track) {
    ModuleBasis out;
    const int ngen = static_cast<int>(gens.size());
    auto unit_rep = [&](int i) {
        ModVec r(ngen, MultiPoly::constant(vars, Rational(0)));
        r[i] = MultiPoly::constant(vars, Rational(1));
        return r;
    };
    for (int i = 0; i < ngen; ++i) {
        if (mv_zero(gens[i])) {
            if (track) out.syzygies.push_back(unit_rep(i));
            continue;
        }
        out.elts.push_back(gens[i]);
        if (track) out.reps.push_back(unit_rep(i));
    }
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < out.elts.size(); ++i)
        for (size_t j = i + 1; j < out.elts.size(); ++j) pairs.push_back({i, j});
    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        auto li = mod_leading(out.elts[i]), lj = mod_leading(out.elts[j]);
        if (li->pos != lj->pos) continue;
        const Exp lcm = exp_lcm(li->e, lj->e);
        const Exp mi = exp_sub(lcm, li->e), mj = exp_sub(lcm, lj->e);
        const Rational ci = out.elts[i][li->pos].coeff(li->e);
        const Rational cj = out.elts[j][lj->pos].coeff(lj->e);
        ModVec s(npos, MultiPoly::constant(vars, Rational(0)));
        mv_axpy(s, mi, Rational(1) / ci, out.elts[i]);
        mv_axpy(s, mj, Rational(-1) / cj, out.elts[j]);
        ModVec rep;
        if (track) {
            rep.assign(ngen, MultiPoly::constant(vars, Rational(0)));
            mv_axpy(rep, mi, Rational(1) / ci, out.reps[i]);
            mv_axpy(rep, mj, Rational(-1) / cj, out.reps[j]);
        }
        ModVec nf = mod_reduce(std::move(s), out.elts, track ? &out.reps : nullptr,
                               track ? &rep : nullptr);
        if (mv_zero(nf)) {
            if (track && !mv_zero(rep)) out.syzygies.push_back(std::move(rep));
            continue;
        }
        for (size_t k = 0; k < out.elts.size(); ++k) pairs.push_back({k, out.elts.size()});
        out.elts.push_back(std::move(nf));
        if (track) out.reps.push_back(std::move(rep));
    }
    return out;
}

} // namespace

std::vector<ModVec> syzygy_generators(const std::vector<ModVec>& gens,
                                      const std::vector<std::string>& vars, int npos) {
    return module_buchberger(gens, vars, npos, true).syzygies;
}

// ---------------------------------------------------------------------------
// Module homology
// ---------------------------------------------------------------------------

namespace {

struct SlotKeyLess {
    bool operator()(const std::pair<int, Exp>& a, const std::pair<int, Exp>& b) const {
        if (a.first != b.first) return a.first < b.first;
        return GrevlexLess{}(a.second, b.second);
    }
};

// Incremental rational span of module vectors with coordinate recovery.
struct QSpan {
    std::map<std::pair<int, Exp>, int, SlotKeyLess> slots;
    std::vector<std::map<int, Rational>> ech;
    std::vector<int> pivot;
    std::vector<std::vector<Rational>> expr; // echelon rows over inserted vectors
    int inserted = 0;

    std::map<int, Rational> sparse(const ModVec& v) {
        std::map<int, Rational> out;
        for (size_t p = 0; p < v.size(); ++p)
            for (const auto& [e, c] : v[p].terms()) {
                auto key = std::make_pair(static_cast<int>(p), e);
                auto it = slots.find(key);
                if (it == slots.end())
                    it = slots.emplace(key, static_cast<int>(slots.size())).first;
                out[it->second] = c;
            }
        return out;
    }

    static void submul(std::map<int, Rational>& w, const Rational& m,
                       const std::map<int, Rational>& row) {
        for (const auto& [j, c] : row) {
            Rational& cell = w[j];
            cell -= m * c;
            if (cell.is_zero()) w.erase(j);
        }
    }

    // Reduces w in place; when coords is non-null it receives the expression
    // of the eliminated part over the inserted vectors.
    void eliminate(std::map<int, Rational>& w, std::vector<Rational>* coords) const {
        if (coords) coords->assign(inserted, Rational(0));
        for (size_t k = 0; k < ech.size(); ++k) {
            auto it = w.find(pivot[k]);
            if (it == w.end()) continue;
            const Rational m = it->second / ech[k].at(pivot[k]);
            submul(w, m, ech[k]);
            if (coords)
                for (int j = 0; j < inserted; ++j) (*coords)[j] += m * expr[k][j];
        }
    }

    bool insert(const ModVec& v) {
        std::map<int, Rational> w = sparse(v);
        std::vector<Rational> coords;
        eliminate(w, &coords);
        if (w.empty()) return false;
        for (auto& row : expr) row.push_back(Rational(0));
        coords.push_back(Rational(-1)); // residue = v - sum coords * inserted
        for (auto& cc : coords) cc = -cc;
        ech.push_back(std::move(w));
        pivot.push_back(ech.back().begin()->first);
        expr.push_back(std::move(coords));
        ++inserted;
        return true;
    }
};

} // namespace

std::vector<Rational> ModuleHomology::coords(const ModVec& v) const {
    ModVec nf = mod_reduce(v, image_gb);
    QSpan span;
    for (const auto& b : basis)
        if (!span.insert(b)) throw CheckFailure("homology basis is dependent");
    std::map<int, Rational> w = span.sparse(nf);
    std::vector<Rational> out;
    span.eliminate(w, &out);
    if (!w.empty()) throw CheckFailure("vector outside the homology span");
    return out;
}

ModuleHomology module_homology(const PolyMat& d_in, const PolyMat& d_out, long cap,
                               const std::vector<int>& act_vars) {
    if (d_in.rows() != d_out.cols()) throw Error("module homology shape mismatch");
    ModuleHomology H;
    H.vars = d_out.vars();
    H.npos = d_out.cols();

    std::vector<ModVec> cols;
    for (int j = 0; j < d_out.cols(); ++j) {
        ModVec v;
        for (int i = 0; i < d_out.rows(); ++i) v.push_back(d_out.at(i, j));
        cols.push_back(std::move(v));
    }
    std::vector<ModVec> ker = syzygy_generators(cols, H.vars, d_out.rows());

    std::vector<ModVec> im;
    for (int j = 0; j < d_in.cols(); ++j) {
        ModVec v;
        for (int i = 0; i < d_in.rows(); ++i) v.push_back(d_in.at(i, j));
        if (!mv_zero(v)) im.push_back(std::move(v));
    }
    H.image_gb = module_buchberger(im, H.vars, H.npos, false).elts;

    std::vector<int> acting = act_vars;
    if (acting.empty())
        for (size_t i = 0; i < H.vars.size(); ++i) acting.push_back(static_cast<int>(i));

    QSpan span;
    std::vector<ModVec> queue;
    for (const auto& k : ker) {
        ModVec nf = mod_reduce(k, H.image_gb);
        if (mv_zero(nf)) continue;
        if (span.insert(nf)) {
            H.basis.push_back(nf);
            queue.push_back(std::move(nf));
        }
    }
    while (!queue.empty()) {
        if (static_cast<long>(H.basis.size()) > cap) {
            H.out_of_scale = true;
            H.dim = -1;
            return H;
        }
        ModVec cur = std::move(queue.back());
        queue.pop_back();
        for (int x : acting) {
            ModVec nxt = cur;
            for (auto& p : nxt)
                if (!p.is_zero()) p *= MultiPoly::variable(H.vars, x);
            nxt = mod_reduce(std::move(nxt), H.image_gb);
            if (mv_zero(nxt)) continue;
            if (span.insert(nxt)) {
                H.basis.push_back(nxt);
                queue.push_back(std::move(nxt));
            }
        }
    }
    H.dim = static_cast<long>(H.basis.size());
    return H;
}

// ---------------------------------------------------------------------------
// Closed-diagram homology
// ---------------------------------------------------------------------------

namespace {

struct VertexPipeline {
    KoszulMF mf;
    ReducedMF red;
    SubsetBasis red_basis;
    ModuleHomology heven, hodd;
    long residual = 0;
    std::vector<int> remaining_vars;
};

// dim over Q of the quotient of the polynomial ring in the remaining
// variables by all reduced row entries; -1 when infinite.
long residual_ring_dimension(const KoszulMF& m, const std::vector<int>& remaining) {
    if (remaining.empty()) {
        for (const auto& r : m.rows)
            if (!r.a.is_zero() || !r.b.is_zero()) return 0;
        return 1;
    }
    std::vector<std::string> sub;
    std::vector<int> where(m.vars.size(), -1);
    for (int v : remaining) {
        where[v] = static_cast<int>(sub.size());
        sub.push_back(m.vars[v]);
    }
    std::vector<MultiPoly> gens;
    for (const auto& r : m.rows)
        for (const MultiPoly* p : {&r.a, &r.b}) {
            if (p->is_zero()) continue;
            MultiPoly q(sub);
            for (const auto& [e, c] : p->terms()) {
                Exp se(sub.size(), 0);
                for (size_t i = 0; i < e.size(); ++i) {
                    if (e[i] == 0) continue;
                    if (where[i] < 0)
                        throw CheckFailure("excluded variable survives in a row entry");
                    se[where[i]] = e[i];
                }
                q.add_term(se, c);
            }
            gens.push_back(std::move(q));
        }
    if (gens.empty()) return -1;
    Ideal I(gens);
    if (!I.is_finite_dimensional()) return -1;
    return static_cast<long>(I.standard_monomials().size());
}

} // namespace

MFHomologyReport closed_homology(const LinkDiagram& L, const RootMultiset& sigma,
                                 bool parallel) {
    LinkDiagram link = L;
    link.analyze();
    if (!link.closed) throw Error("matrix factorization engine needs a closed diagram");
    for (int lab : link.labels)
        if (lab != 1) throw Error("matrix factorization engine handles 1-labeled strands");
    const int n = static_cast<int>(link.word.size());
    const int m = link.strands;
    const int N = sigma.size();
    if (n > 3) throw Error("matrix factorization engine handles at most 3 crossings");
    if (N > 4 || (n > 0 && N > 3))
        throw Error("deformation size out of engine scope for this diagram");

    Potential pot = Potential::make(sigma);

    // Slot variables x{t}_{p}; the closure identifies level n with level 0.
    const int levels = std::max(n, 1);
    std::vector<std::string> vars;
    for (int t = 0; t < levels; ++t)
        for (int p = 0; p < m; ++p)
            vars.push_back("x" + std::to_string(t) + "_" + std::to_string(p));
    auto slot = [&](int t, int p) { return (t % levels) * m + p; };

    const int n_neg = static_cast<int>(
        std::count_if(link.word.begin(), link.word.end(), [](int w) { return w < 0; }));
    const long nvert = 1L << n;

    // Crossing lifts, solved once per sign over their own generic variables.
    std::map<int, CrossingMF> lift;
    for (int w : link.word) {
        const int s = w > 0 ? 1 : -1;
        if (!lift.count(s)) lift.emplace(s, crossing_mf_complex(s, sigma));
    }

    // Rows of the cube-vertex factorization, level-major; a crossing at
    // braid position q occupies the two consecutive rows (level*m + q,
    // level*m + q + 1) in every resolution, so row indices align across
    // masks. Bit 0 of the mask is the wide resolution of a positive letter
    // and the oriented resolution of a negative one, matching the cube
    // engine's degree conventions.
    auto vertex_mf = [&](long mask) {
        KoszulMF out;
        out.vars = vars;
        if (n == 0) {
            for (int p = 0; p < m; ++p)
                out.rows.push_back(
                    {pot.saddle_entry(vars, slot(0, p), slot(0, p)), zero_like(vars)});
            return out;
        }
        for (int t = 0; t < n; ++t) {
            const int letter = link.word[t];
            const int q = std::abs(letter) - 1;
            const bool bit = (mask >> t) & 1L;
            const bool oriented = letter > 0 ? !bit : bit;
            for (int p = 0; p < m; ++p) {
                if (p == q + 1) continue;
                if (p == q) {
                    MultiPoly b1 = MultiPoly::variable(vars, slot(t, q));
                    MultiPoly b2 = MultiPoly::variable(vars, slot(t, q + 1));
                    MultiPoly t1 = MultiPoly::variable(vars, slot(t + 1, q));
                    MultiPoly t2 = MultiPoly::variable(vars, slot(t + 1, q + 1));
                    if (oriented) {
                        out.rows.push_back(
                            {pot.saddle_entry(vars, slot(t, q), slot(t + 1, q)), b1 - t1});
                        out.rows.push_back(
                            {pot.saddle_entry(vars, slot(t, q + 1), slot(t + 1, q + 1)),
                             b2 - t2});
                    } else {
                        auto U = pot.pair_coeffs(b1 + b2, b1 * b2, t1 + t2, t1 * t2);
                        out.rows.push_back({U[0], b1 + b2 - t1 - t2});
                        out.rows.push_back({U[1], b1 * b2 - t1 * t2});
                    }
                } else {
                    out.rows.push_back({pot.saddle_entry(vars, slot(t, p), slot(t + 1, p)),
                                        MultiPoly::variable(vars, slot(t, p)) -
                                            MultiPoly::variable(vars, slot(t + 1, p))});
                }
            }
        }
        return out;
    };

    MFHomologyReport report;

    std::vector<VertexPipeline> vert(nvert);
    std::vector<std::string> verr(nvert);
    parallel_for(
        static_cast<size_t>(nvert),
        [&](size_t v) {
            try {
                VertexPipeline& vp = vert[v];
                vp.mf = vertex_mf(static_cast<long>(v));
                if (!vp.mf.potential().is_zero())
                    throw CheckFailure("closed diagram potential is nonzero");
                vp.red = exclude_all(vp.mf);
                vp.red_basis = SubsetBasis::make(vp.red.mf.nrows());
                std::vector<bool> gone(vars.size(), false);
                for (const auto& s : vp.red.steps) gone[s.var] = true;
                for (size_t i = 0; i < vars.size(); ++i)
                    if (!gone[i]) vp.remaining_vars.push_back(static_cast<int>(i));
                vp.residual = residual_ring_dimension(vp.red.mf, vp.remaining_vars);
                if (vp.residual < 0) return;
                TwoPeriodicComplex tp = vp.red.mf.two_periodic();
                tp.verify_potential(zero_like(vars));
                const long cap = 16L * (vp.residual + 1) * tp.rank0() + 64;
                vp.heven = module_homology(tp.d1, tp.d0, cap, vp.remaining_vars);
                vp.hodd = module_homology(tp.d0, tp.d1, cap, vp.remaining_vars);
            } catch (const std::exception& ex) {
                verr[v] = ex.what();
            }
        },
        parallel);
    for (const auto& e : verr)
        if (!e.empty()) throw CheckFailure(e);

    for (long v = 0; v < nvert; ++v) {
        report.exclusion_steps += static_cast<long>(vert[v].red.steps.size());
        if (vert[v].residual < 0) {
            report.residual_ring_dim = -1;
            report.out_of_scale = true;
            report.note = "residual ring is infinite dimensional at vertex " + std::to_string(v);
            return report;
        }
        report.residual_ring_dim = std::max(report.residual_ring_dim, vert[v].residual);
        if (vert[v].heven.out_of_scale || vert[v].hodd.out_of_scale) {
            report.out_of_scale = true;
            report.note = "homology span did not stabilize at vertex " + std::to_string(v);
            return report;
        }
    }

    // Induced maps on vertex homology for each cube edge, with Koszul signs.
    struct EdgeBlock {
        long from = 0, to = 0;
        RatMat even, odd;
    };
    std::vector<std::pair<long, int>> edge_list;
    for (long v = 0; v < nvert; ++v)
        for (int cb = 0; cb < n; ++cb)
            if (!((v >> cb) & 1L)) edge_list.push_back({v, cb});
    std::vector<EdgeBlock> blocks(edge_list.size());
    std::vector<std::string> eerr(edge_list.size());
    parallel_for(
        edge_list.size(),
        [&](size_t idx) {
            try {
                const auto [v, cb] = edge_list[idx];
                const long w = v | (1L << cb);
                const VertexPipeline& S = vert[v];
                const VertexPipeline& T = vert[w];
                const int sign = link.word[cb] > 0 ? 1 : -1;
                const CrossingMF& X = lift.at(sign);
                const int q = std::abs(link.word[cb]) - 1;
                const std::vector<int> where = {slot(cb, q), slot(cb, q + 1),
                                                slot(cb + 1, q), slot(cb + 1, q + 1)};
                // Local lift on the two crossing rows, embedded into the
                // diagram variables.
                SubsetBasis lb = SubsetBasis::make(2);
                PolyMat local(4, 4, vars);
                for (int j = 0; j < 2; ++j)
                    for (int i = 0; i < 2; ++i) {
                        local.at(static_cast<int>(lb.even[i]), static_cast<int>(lb.even[j])) =
                            embed_poly(X.chi.f0.at(i, j), vars, where);
                        local.at(static_cast<int>(lb.odd[i]), static_cast<int>(lb.odd[j])) =
                            embed_poly(X.chi.f1.at(i, j), vars, where);
                    }
                // Extend by the identity over the other rows; an even
                // morphism picks up no interleaving signs.
                const int R = S.mf.nrows();
                const int r0 = cb * m + q;
                const long full_rank = 1L << R;
                PolyMat ext(static_cast<int>(full_rank), static_cast<int>(full_rank), vars);
                for (long mask = 0; mask < full_rank; ++mask) {
                    const long loc = (mask >> r0) & 3L;
                    const long rest = mask & ~(3L << r0);
                    for (long locp = 0; locp < 4; ++locp) {
                        const MultiPoly& cf =
                            local.at(static_cast<int>(locp), static_cast<int>(loc));
                        if (cf.is_zero()) continue;
                        ext.at(static_cast<int>(rest | (locp << r0)), static_cast<int>(mask)) =
                            cf;
                    }
                }
                PolyMat red = transport_full(std::move(ext), S.red.steps, T.red.steps, R);
                if (full_differential(T.red.mf) * red != red * full_differential(S.red.mf))
                    throw CheckFailure("transported crossing lift is not a chain map");
                const Rational ks(SubsetBasis::insert_sign(v, cb));
                auto induce = [&](const ModuleHomology& hs, const ModuleHomology& ht,
                                  const std::vector<long>& src_masks,
                                  const std::vector<long>& dst_masks) {
                    RatMat out(static_cast<int>(ht.dim), static_cast<int>(hs.dim));
                    for (long j = 0; j < hs.dim; ++j) {
                        ModVec img(dst_masks.size(), zero_like(vars));
                        for (size_t sj = 0; sj < src_masks.size(); ++sj) {
                            const MultiPoly& hv = hs.basis[j][sj];
                            if (hv.is_zero()) continue;
                            for (size_t di = 0; di < dst_masks.size(); ++di) {
                                const MultiPoly& cf = red.at(static_cast<int>(dst_masks[di]),
                                                             static_cast<int>(src_masks[sj]));
                                if (!cf.is_zero()) img[di] += cf * hv;
                            }
                        }
                        const std::vector<Rational> co = ht.coords(img);
                        for (long i = 0; i < ht.dim; ++i)
                            out.at(static_cast<int>(i), static_cast<int>(j)) = co[i] * ks;
                    }
                    return out;
                };
                EdgeBlock blk;
                blk.from = v;
                blk.to = w;
                blk.even = induce(S.heven, T.heven, S.red_basis.even, T.red_basis.even);
                blk.odd = induce(S.hodd, T.hodd, S.red_basis.odd, T.red_basis.odd);
                blocks[idx] = std::move(blk);
            } catch (const std::exception& ex) {
                eerr[idx] = ex.what();
            }
        },
        parallel);
    for (const auto& e : eerr)
        if (!e.empty()) throw CheckFailure(e);

    // Assemble the induced complex per cube degree and take its homology.
    auto vdeg = [&](long v) { return popcount(v) - n_neg; };
    std::map<int, std::vector<long>> by_degree;
    for (long v = 0; v < nvert; ++v) by_degree[vdeg(v)].push_back(v);
    std::map<long, long> offset;
    std::map<int, long> dim_of_degree;
    for (const auto& [d, vs] : by_degree) {
        long off = 0;
        for (long v : vs) {
            offset[v] = off;
            off += vert[v].heven.dim + vert[v].hodd.dim;
        }
        dim_of_degree[d] = off;
    }
    std::map<int, RatMat> diff;
    for (const auto& [d, vs] : by_degree) {
        (void)vs;
        if (dim_of_degree.count(d + 1))
            diff.emplace(d, RatMat(static_cast<int>(dim_of_degree[d + 1]),
                                   static_cast<int>(dim_of_degree[d])));
    }
    for (const auto& blk : blocks) {
        auto it = diff.find(vdeg(blk.from));
        if (it == diff.end()) continue;
        RatMat& M = it->second;
        const long co = offset[blk.from], ro = offset[blk.to];
        const long se = vert[blk.from].heven.dim, te = vert[blk.to].heven.dim;
        for (int i = 0; i < blk.even.rows(); ++i)
            for (int j = 0; j < blk.even.cols(); ++j)
                M.at(static_cast<int>(ro + i), static_cast<int>(co + j)) = blk.even.at(i, j);
        for (int i = 0; i < blk.odd.rows(); ++i)
            for (int j = 0; j < blk.odd.cols(); ++j)
                M.at(static_cast<int>(ro + te + i), static_cast<int>(co + se + j)) =
                    blk.odd.at(i, j);
    }
    for (const auto& [d, M] : diff) {
        auto nx = diff.find(d + 1);
        if (nx != diff.end() && !(nx->second * M).is_zero())
            throw CheckFailure("induced differential does not square to zero");
    }
    for (const auto& [d, dim] : dim_of_degree) {
        long rk_out = 0, rk_in = 0;
        if (auto it = diff.find(d); it != diff.end()) rk_out = rank(it->second);
        if (auto jt = diff.find(d - 1); jt != diff.end()) rk_in = rank(jt->second);
        const long h = dim - rk_out - rk_in;
        if (h < 0) throw CheckFailure("negative homology dimension");
        if (h > 0) report.table.add(d, h);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Quotient-ring identity checks
// ---------------------------------------------------------------------------

namespace {

// Digon with legs labeled 1 (variable m) and k (alphabet E) inside a
// (k+1)-labeled edge with outer coordinates F. Eliminating E by hand gives
// the small presentation Q[m, F] / (sum_j (-1)^j F_j m^{k+1-j}), a free
// module over Q[F] with basis 1, m, ..., m^k; the cap reads off the m^k
// coefficient, and decorations past the top reduce to complete symmetric
// functions of the outer alphabet.
bool check_digon_cap_chain(std::string* witness) {
    for (int k = 1; k <= 2; ++k) {
        std::vector<std::string> big;
        big.push_back("m");
        for (int i = 1; i <= k; ++i) big.push_back("E" + std::to_string(i));
        for (int i = 1; i <= k + 1; ++i) big.push_back("F" + std::to_string(i));
        auto E = [&](int i) -> MultiPoly {
            if (i == 0) return MultiPoly::constant(big, Rational(1));
            if (i > k) return MultiPoly::constant(big, Rational(0));
            return MultiPoly::variable(big, i);
        };
        auto F = [&](int i) { return MultiPoly::variable(big, k + i); };
        const MultiPoly mv = MultiPoly::variable(big, 0);
        std::vector<MultiPoly> bgens;
        for (int i = 1; i <= k + 1; ++i) bgens.push_back(E(i) + mv * E(i - 1) - F(i));
        Ideal I_big(bgens);

        // Triangular elimination of the inner alphabet: E_i = F_i - m E_{i-1}.
        std::vector<MultiPoly> T = {F(1) - mv};
        for (int i = 2; i <= k; ++i) T.push_back(F(i) - mv * T.back());
        for (int i = 1; i <= k; ++i)
            if (!I_big.contains(E(i) - T[i - 1])) {
                *witness = "digon elimination fails at E" + std::to_string(i);
                return false;
            }
        const MultiPoly rel_big = mv * T.back() - F(k + 1);
        if (!I_big.contains(rel_big)) {
            *witness = "digon power relation is not a consequence of the presentation";
            return false;
        }

        std::vector<std::string> small;
        small.push_back("m");
        for (int i = 1; i <= k + 1; ++i) small.push_back("F" + std::to_string(i));
        MultiPoly rel(small);
        for (int j = 0; j <= k + 1; ++j) {
            Exp e(small.size(), 0);
            e[0] = k + 1 - j;
            if (j > 0) e[j] = 1;
            rel.add_term(e, Rational(j % 2 == 0 ? 1 : -1));
        }
        if (rel.lift_to(big).scaled(Rational(k % 2 == 0 ? 1 : -1)) != rel_big) {
            *witness = "digon power relation disagrees with the alternating formula";
            return false;
        }

        Ideal I_small({rel});
        auto kappa = [&](const MultiPoly& nf) {
            MultiPoly out(small);
            for (const auto& [e, c] : nf.terms())
                if (e[0] == k) {
                    Exp s = e;
                    s[0] = 0;
                    out.add_term(s, c);
                }
            return out;
        };
        const MultiPoly msmall = MultiPoly::variable(small, 0);
        for (int j = 0; j <= k; ++j) {
            const MultiPoly nf = I_small.normal_form(msmall.pow(j));
            if (nf != msmall.pow(j)) {
                *witness = "digon basis power m^" + std::to_string(j) + " is not standard";
                return false;
            }
            const MultiPoly expect =
                j == k ? MultiPoly::constant(small, Rational(1)) : MultiPoly(small);
            if (kappa(nf) != expect) {
                *witness = "digon cap of m^" + std::to_string(j) + " is wrong";
                return false;
            }
        }
        const MultiPoly over1 = I_small.normal_form(msmall.pow(k + 1));
        for (const auto& [e, c] : over1.terms()) {
            (void)c;
            if (e[0] > k) {
                *witness = "digon quotient is not spanned by powers up to m^k";
                return false;
            }
        }
        // cap(m^{k+j}) = h_j of the outer alphabet: h_1 = F1, h_2 = F1^2 - F2.
        const MultiPoly F1 = MultiPoly::variable(small, 1);
        const MultiPoly F2 = MultiPoly::variable(small, 2);
        if (kappa(over1) != F1) {
            *witness = "digon cap of m^{k+1} is not the first outer coordinate";
            return false;
        }
        if (kappa(I_small.normal_form(msmall.pow(k + 2))) != F1 * F1 - F2) {
            *witness = "digon cap of m^{k+2} is not h_2 of the outer alphabet";
            return false;
        }
        if (k == 1 && over1 != msmall * F1 - F2) {
            *witness = "digon reduction of m^2 at k = 1 is wrong";
            return false;
        }
    }
    return true;
}

bool check_digon_map_difference(std::string* witness) {
    // Two 1-labeled legs m, n inside a 2-labeled edge with outer coordinates
    // (w1, w2): the quotient is free with basis {1, m} over Q[w1, w2]. The
    // cap-then-include composite sends 1 -> 1, m -> w1; the complementary
    // composite sends 1 -> 0, m -> n. Their difference is the identity.
    std::vector<std::string> v = {"m", "n", "w1", "w2"};
    const MultiPoly m = MultiPoly::variable(v, 0), n = MultiPoly::variable(v, 1);
    const MultiPoly w1 = MultiPoly::variable(v, 2), w2 = MultiPoly::variable(v, 3);
    Ideal I({m + n - w1, m * n - w2});
    const MultiPoly one = MultiPoly::constant(v, Rational(1));
    if (!I.normal_form(m + n - w1).is_zero() || !I.normal_form(m * n - w2).is_zero()) {
        *witness = "digon presentation does not close";
        return false;
    }
    if (!I.normal_form((one - MultiPoly(v)) - one).is_zero()) {
        *witness = "digon composite difference misses the identity on 1";
        return false;
    }
    if (!I.normal_form((w1 - n) - m).is_zero()) {
        *witness = "digon composite difference misses the identity on m";
        return false;
    }
    if (I.normal_form(n * n) != n * w1 - w2) {
        *witness = "digon quotient has the wrong quadratic reduction";
        return false;
    }
    if (I.normal_form(m - n).is_zero()) {
        *witness = "digon legs collapse in the quotient";
        return false;
    }
    return true;
}

bool check_square_transport(std::string* witness) {
    // Square of four vertices: the bottom 2-labeled edge (p1, p2) splits
    // into legs l and w; w merges with u into the middle 2-labeled edge,
    // which splits into m and z; l merges with m into the top 2-labeled
    // edge (q1, q2).
    std::vector<std::string> v = {"l", "w", "m", "u", "z", "p1", "p2", "q1", "q2"};
    auto V = [&](int i) { return MultiPoly::variable(v, i); };
    const MultiPoly l = V(0), w = V(1), mm = V(2), u = V(3), z = V(4);
    const MultiPoly p1 = V(5), p2 = V(6), q1 = V(7), q2 = V(8);
    Ideal I({l + w - p1, l * w - p2, w + u - mm - z, w * u - mm * z, l + mm - q1,
             l * mm - q2});
    auto vanishes = [&](const MultiPoly& f) { return I.normal_form(f).is_zero(); };
    if (!vanishes(w - (p1 - l)) || !vanishes(mm - (q1 - l)) || !vanishes(z - (w + u - mm))) {
        *witness = "square presentation does not eliminate the inner legs";
        return false;
    }
    if (!vanishes(p1 + u - q1 - z)) {
        *witness = "square outer alphabets are not balanced";
        return false;
    }
    if (!vanishes(l * w - p2) || !vanishes(l * mm - q2) || !vanishes(w * u - mm * z)) {
        *witness = "square quadratic relations fail";
        return false;
    }
    if (vanishes(z - w)) {
        *witness = "square transport is degenerate (z = w)";
        return false;
    }
    // The two composites act on the class of l as l -> p1 - z and
    // l -> w - z; their difference must be exactly l.
    if (!vanishes((p1 - z) - (w - z) - l)) {
        *witness = "square composite difference is not the identity on l";
        return false;
    }
    // Module structure over the outer subring: the inner legs l, w, u are
    // eliminated and m appears at most linearly, so the reduction of l^2
    // lives in the span of {1, m} over the outer coordinates.
    const MultiPoly red = I.normal_form(l * l);
    for (const auto& [e, c] : red.terms()) {
        (void)c;
        if (e[0] > 0 || e[1] > 0 || e[3] > 0 || e[2] > 1) {
            *witness = "square quotient is not spanned by {1, m} over the outer ring";
            return false;
        }
    }
    return true;
}

bool check_lr_box_symmetry(std::string* witness) {
    const std::vector<Partition> small = partitions_in_box(1, 2);
    const std::vector<Partition> big = partitions_in_box(2, 2);
    for (const auto& a : small)
        for (const auto& b : small)
            for (const auto& g : big) {
                const long lhs = lr_coeff(a, b, g);
                const long rhs = lr_coeff(box_complement(a, 1, 2), box_complement(b, 1, 2),
                                          box_complement(g, 2, 2));
                if (lhs != rhs) {
                    *witness = "box complement symmetry fails at (" + a.str() + ", " +
                               b.str() + "; " + g.str() + ")";
                    return false;
                }
            }
    return true;
}

bool check_zip_unzip(const RootMultiset& sigma, std::string* witness) {
    CrossingMF pos = crossing_mf_complex(1, sigma);
    CrossingMF neg = crossing_mf_complex(-1, sigma);
    TwoPeriodicComplex orc = pos.oriented.two_periodic();
    TwoPeriodicComplex wd = pos.wide.two_periodic();
    const MultiPoly dec =
        MultiPoly::variable(pos.vars, 2) - MultiPoly::variable(pos.vars, 1); // y1 - x2
    MFMorphism on_or, on_wd;
    on_or.f0 = neg.chi.f0 * pos.chi.f0;
    on_or.f1 = neg.chi.f1 * pos.chi.f1;
    on_wd.f0 = pos.chi.f0 * neg.chi.f0;
    on_wd.f1 = pos.chi.f1 * neg.chi.f1;
    MFMorphism mul;
    mul.f0 = PolyMat::identity(2, pos.vars);
    mul.f1 = PolyMat::identity(2, pos.vars);
    for (int i = 0; i < 2; ++i) {
        mul.f0.at(i, i) = dec;
        mul.f1.at(i, i) = dec;
    }
    const int bound = 2 * sigma.size() + 2;
    if (!homotopy_between(on_or, mul, orc, orc, bound)) {
        *witness = "zip then unzip is not the decoration on the oriented side";
        return false;
    }
    if (!homotopy_between(on_wd, mul, wd, wd, bound)) {
        *witness = "unzip then zip is not the decoration on the wide side";
        return false;
    }
    return true;
}

} // namespace

QRCheckReport qr_identity_checks(const RootMultiset& sigma) {
    QRCheckReport r;
    std::string w;
    r.digon_cap_chain = check_digon_cap_chain(&w);
    if (!r.digon_cap_chain && r.witness.empty()) r.witness = w;
    r.digon_map_difference = check_digon_map_difference(&w);
    if (!r.digon_map_difference && r.witness.empty()) r.witness = w;
    r.square_transport = check_square_transport(&w);
    if (!r.square_transport && r.witness.empty()) r.witness = w;
    r.lr_box_symmetry = check_lr_box_symmetry(&w);
    if (!r.lr_box_symmetry && r.witness.empty()) r.witness = w;
    r.zip_unzip_decoration = check_zip_unzip(sigma, &w);
    if (!r.zip_unzip_decoration && r.witness.empty()) r.witness = w;
    return r;
}

} // namespace dlh
