#include "dlh/ideal.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "dlh/error.hpp"

namespace dlh {

namespace {

bool coprime(const Exp& a, const Exp& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

} // namespace

MultiPoly poly_reduce(const MultiPoly& f, const std::vector<MultiPoly>& G) {
    MultiPoly p = f;
    MultiPoly r = MultiPoly::constant(f.vars(), Rational(0));
    while (!p.is_zero()) {
        Exp le = p.leading_exp();
        // among the usable reducers prefer the one with the fewest terms,
        // which keeps intermediate results short
        const MultiPoly* best = nullptr;
        for (const auto& g : G) {
            if (g.is_zero()) continue;
            if (!exp_divides(g.leading_exp(), le)) continue;
            if (!best || g.terms().size() < best->terms().size()) best = &g;
        }
        if (best) {
            Rational c = p.leading_coeff() / best->leading_coeff();
            p -= best->mul_monomial(exp_sub(le, best->leading_exp()), c);
        } else {
            r.add_term(le, p.leading_coeff());
            p.add_term(le, -p.leading_coeff());
        }
    }
    return r;
}

MultiPoly s_poly(const MultiPoly& f, const MultiPoly& g) {
    f.check_same_vars(g);
    const Exp& lf = f.leading_exp();
    const Exp& lg = g.leading_exp();
    Exp l = exp_lcm(lf, lg);
    MultiPoly a = f.mul_monomial(exp_sub(l, lf), f.leading_coeff().inv());
    MultiPoly b = g.mul_monomial(exp_sub(l, lg), g.leading_coeff().inv());
    return a - b;
}

std::vector<MultiPoly> buchberger(std::vector<MultiPoly> gens) {
    std::vector<MultiPoly> G;
    for (auto& g : gens)
        if (!g.is_zero()) G.push_back(g.scaled(g.leading_coeff().inv()));
    // pending S-pairs keyed by their lcm; always treat the grevlex-smallest
    // lcm first (normal selection)
    GrevlexLess less;
    auto pair_less = [&](const std::pair<size_t, size_t>& a,
                         const std::pair<size_t, size_t>& b) {
        Exp la = exp_lcm(G[a.first].leading_exp(), G[a.second].leading_exp());
        Exp lb = exp_lcm(G[b.first].leading_exp(), G[b.second].leading_exp());
        if (la != lb) return less(la, lb);
        return a < b;
    };
    std::set<std::pair<size_t, size_t>, decltype(pair_less)> pending(pair_less);
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = i + 1; j < G.size(); ++j) pending.emplace(i, j);
    auto still_pending = [&](size_t x, size_t y) {
        return pending.count({std::min(x, y), std::max(x, y)}) != 0;
    };
    while (!pending.empty()) {
        auto [i, j] = *pending.begin();
        pending.erase(pending.begin());
        if (coprime(G[i].leading_exp(), G[j].leading_exp())) continue;
        // chain criterion: the pair is redundant if some other leading term
        // divides the lcm and both mixed pairs were already handled
        Exp l = exp_lcm(G[i].leading_exp(), G[j].leading_exp());
        bool redundant = false;
        for (size_t k = 0; k < G.size() && !redundant; ++k) {
            if (k == i || k == j) continue;
            if (exp_divides(G[k].leading_exp(), l) && !still_pending(i, k) &&
                !still_pending(j, k))
                redundant = true;
        }
        if (redundant) continue;
        MultiPoly r = poly_reduce(s_poly(G[i], G[j]), G);
        if (r.is_zero()) continue;
        r = r.scaled(r.leading_coeff().inv());
        size_t fresh = G.size();
        G.push_back(std::move(r));
        for (size_t k = 0; k < fresh; ++k) pending.emplace(k, fresh);
    }
    // Auto-reduce: drop redundant leading terms, then fully reduce each
    // element against the others.
    std::vector<MultiPoly> minimal;
    for (size_t i = 0; i < G.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < G.size(); ++j) {
            if (i == j) continue;
            if (!exp_divides(G[j].leading_exp(), G[i].leading_exp())) continue;
            if (G[j].leading_exp() == G[i].leading_exp() && j > i) continue;
            redundant = true;
            break;
        }
        if (!redundant) minimal.push_back(G[i]);
    }
    std::vector<MultiPoly> reduced = minimal;
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<MultiPoly> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        MultiPoly r = poly_reduce(minimal[i], others);
        if (!r.is_zero()) r = r.scaled(r.leading_coeff().inv());
        reduced[i] = std::move(r);
    }
    std::erase_if(reduced, [](const MultiPoly& g) { return g.is_zero(); });
    std::sort(reduced.begin(), reduced.end(), [&](const MultiPoly& a, const MultiPoly& b) {
        return less(a.leading_exp(), b.leading_exp());
    });
    return reduced;
}

Ideal::Ideal(std::vector<MultiPoly> gens) : gens_(std::move(gens)) {
    if (gens_.empty()) throw Error("ideal needs at least one generator to fix the ring");
    vars_ = gens_[0].vars();
    for (const auto& g : gens_) gens_[0].check_same_vars(g);
    gb_ = buchberger(gens_);
}

MultiPoly Ideal::normal_form(const MultiPoly& f) const {
    if (f.vars() != vars_) throw VariableMismatch("normal form in a different ring");
    return poly_reduce(f, gb_);
}

bool Ideal::is_unit_ideal() const {
    return gb_.size() == 1 && gb_[0].is_constant() && !gb_[0].is_zero();
}

bool Ideal::is_finite_dimensional() const {
    if (is_unit_ideal()) return true;
    size_t n = vars_.size();
    for (size_t v = 0; v < n; ++v) {
        bool found = false;
        for (const auto& g : gb_) {
            const Exp& e = g.leading_exp();
            bool pure = e[v] > 0;
            for (size_t w = 0; w < n && pure; ++w)
                if (w != v && e[w] > 0) pure = false;
            if (pure) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::vector<Exp> Ideal::standard_monomials() const {
    if (is_unit_ideal()) return {};
    if (!is_finite_dimensional())
        throw InfiniteDimensional("quotient has infinitely many standard monomials");
    size_t n = vars_.size();
    std::vector<int> bound(n, 0);
    for (size_t v = 0; v < n; ++v) {
        for (const auto& g : gb_) {
            const Exp& e = g.leading_exp();
            bool pure = e[v] > 0;
            for (size_t w = 0; w < n && pure; ++w)
                if (w != v && e[w] > 0) pure = false;
            if (pure && (bound[v] == 0 || e[v] < bound[v])) bound[v] = e[v];
        }
    }
    std::vector<Exp> out;
    Exp cur(n, 0);
    std::function<void(size_t)> rec = [&](size_t v) {
        if (v == n) {
            for (const auto& g : gb_)
                if (exp_divides(g.leading_exp(), cur)) return;
            out.push_back(cur);
            return;
        }
        for (int e = 0; e < bound[v]; ++e) {
            cur[v] = e;
            rec(v + 1);
        }
        cur[v] = 0;
    };
    rec(0);
    GrevlexLess less;
    std::sort(out.begin(), out.end(), less);
    return out;
}

} // namespace dlh
