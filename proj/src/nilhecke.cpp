#include "dlh/nilhecke.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "dlh/error.hpp"
#include "dlh/ideal.hpp"

namespace dlh {

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long factorial(int n) {
    long r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::vector<Exp> monomials_up_to(int nvars, int bound) {
    std::vector<Exp> out;
    Exp cur(nvars, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == nvars) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[pos] = e;
            rec(pos + 1, left - e);
        }
        cur[pos] = 0;
    };
    rec(0, bound);
    return out;
}

MultiPoly divided_difference(const MultiPoly& p, int i) {
    int n = p.nvars();
    if (i < 1 || i >= n) throw Error("divided difference index out of range");
    MultiPoly num = p - p.apply_transposition(i - 1);
    if (num.is_zero()) return num;
    MultiPoly den =
        MultiPoly::variable(p.vars(), i - 1) - MultiPoly::variable(p.vars(), i);
    return num.exact_div(den);
}

MultiPoly antisymmetrize(const MultiPoly& p) {
    int n = p.nvars();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    MultiPoly sum = MultiPoly::constant(p.vars(), Rational(0));
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        MultiPoly img = p.apply_permutation(perm);
        sum += (inv % 2 == 0) ? img : img.scaled(Rational(-1));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

MultiPoly d_longest_oracle(const MultiPoly& p) {
    MultiPoly num = antisymmetrize(p);
    if (num.is_zero()) return num;
    return num.exact_div(vandermonde(p.vars(), full_alphabet(p.vars())));
}

NHWord NHWord::identity(int a) {
    NHWord w(a);
    w.terms_.push_back({Rational(1), {}});
    return w;
}

NHWord NHWord::xi(int a, int i) {
    if (i < 1 || i > a) throw Error("xi index out of range");
    NHWord w(a);
    w.terms_.push_back({Rational(1), {NHGen{true, i}}});
    return w;
}

NHWord NHWord::del(int a, int i) {
    if (i < 1 || i >= a) throw Error("del index out of range");
    NHWord w(a);
    w.terms_.push_back({Rational(1), {NHGen{false, i}}});
    return w;
}

NHWord operator*(const NHWord& u, const NHWord& v) {
    if (u.a_ != v.a_) throw VariableMismatch("strand count mismatch");
    NHWord w(u.a_);
    for (const auto& s : u.terms_)
        for (const auto& t : v.terms_) {
            Rational c = s.coeff * t.coeff;
            if (c == Rational(0)) continue;
            NHTerm prod{c, s.gens};
            prod.gens.insert(prod.gens.end(), t.gens.begin(), t.gens.end());
            w.terms_.push_back(std::move(prod));
        }
    return w;
}

NHWord operator+(const NHWord& u, const NHWord& v) {
    if (u.a_ != v.a_) throw VariableMismatch("strand count mismatch");
    NHWord w = u;
    w.terms_.insert(w.terms_.end(), v.terms_.begin(), v.terms_.end());
    return w;
}

NHWord operator-(const NHWord& u, const NHWord& v) {
    return u + v.scaled(Rational(-1));
}

NHWord NHWord::scaled(const Rational& c) const {
    NHWord w(a_);
    if (c == Rational(0)) return w;
    w.terms_ = terms_;
    for (auto& t : w.terms_) t.coeff = t.coeff * c;
    return w;
}

NHWord NHWord::pow(int k) const {
    if (k < 0) throw Error("negative word power");
    NHWord acc = identity(a_);
    for (int i = 0; i < k; ++i) acc = acc * *this;
    return acc;
}

MultiPoly NHWord::apply(const MultiPoly& p) const {
    if (p.nvars() != a_) throw VariableMismatch("polynomial has wrong strand count");
    MultiPoly out = MultiPoly::constant(p.vars(), Rational(0));
    for (const auto& t : terms_) {
        MultiPoly q = p;
        for (auto it = t.gens.rbegin(); it != t.gens.rend(); ++it) {
            if (q.is_zero()) break;
            if (it->is_xi)
                q = q * MultiPoly::variable(p.vars(), it->index - 1);
            else
                q = divided_difference(q, it->index);
        }
        out += q.scaled(t.coeff);
    }
    return out;
}

bool NHWord::equals_on_degree(const NHWord& other, int degree_bound) const {
    if (a_ != other.a_) throw VariableMismatch("strand count mismatch");
    auto vars = make_vars(a_);
    for (const Exp& e : monomials_up_to(a_, degree_bound)) {
        MultiPoly m = MultiPoly::monomial(vars, e, Rational(1));
        if (apply(m) != other.apply(m)) return false;
    }
    return true;
}

std::string NHWord::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << t.coeff.str();
        for (const auto& g : t.gens)
            os << (g.is_xi ? " xi_" : " del_") << g.index;
    }
    return os.str();
}

NHWord delta_word(int a) {
    NHWord w = NHWord::identity(a);
    for (int i = 1; i < a; ++i) w = w * NHWord::xi(a, i).pow(a - i);
    return w;
}

NHWord d_longest_word(int a) {
    NHWord w = NHWord::identity(a);
    for (int len = a - 1; len >= 1; --len)
        for (int i = 1; i <= len; ++i) w = w * NHWord::del(a, i);
    return w;
}

NHWord e_a_word(int a) { return delta_word(a) * d_longest_word(a); }

std::vector<Exp> theta_basis(int a) {
    std::vector<Exp> blocks;
    Exp tail(a - 1, 0); // exponents of x_2..x_a
    std::function<void(int)> rec = [&](int pos) {
        if (pos == a - 1) {
            blocks.push_back(tail);
            return;
        }
        for (int e = 0; e <= a - (pos + 2); ++e) {
            tail[pos] = e;
            rec(pos + 1);
        }
        tail[pos] = 0;
    };
    rec(0);
    std::vector<Exp> out;
    for (const Exp& b : blocks)
        for (int t = a - 1; t >= 0; --t) {
            Exp e(a, 0);
            e[0] = t;
            for (int i = 0; i < a - 1; ++i) e[i + 1] = b[i];
            out.push_back(e);
        }
    return out;
}

namespace {

// Expands polynomials over the staircase monomials x^e, 0 <= e_i <= a-i,
// with coefficients symmetric in the ambient variables. Works one variable
// at a time: a coefficient symmetric in x_{s+2}..x_a is rewritten in the
// elementary symmetric polynomials of x_{s+1}..x_a and leftover powers of
// x_{s+1}, and those powers are reduced below a-s using the relation
// prod_{k>s} (x_{s+1} - x_k) = 0.
class StaircaseExpander {
public:
    explicit StaircaseExpander(int a) : a_(a), vars_(make_vars(a)) {
        alphabet_.resize(a);
        tvars_.resize(a);
        esub_.resize(a);
        tpow_.resize(a);
        elem_.resize(a);
        for (int s = 0; s < a; ++s) {
            int m = a - s;
            for (int p = s; p < a; ++p) alphabet_[s].push_back(p);
            tvars_[s].push_back("t");
            for (int i = 1; i <= m; ++i) tvars_[s].push_back("E" + std::to_string(i));
            // e_i of the alphabet without its first variable:
            //   e'_i = sum_j (-1)^j t^j E_{i-j}.
            for (int i = 1; i < m; ++i) {
                MultiPoly sub = MultiPoly::constant(tvars_[s], Rational(0));
                for (int j = 0; j <= i; ++j) {
                    Exp e(m + 1, 0);
                    e[0] = j;
                    if (i - j > 0) e[i - j] = 1;
                    sub += MultiPoly::monomial(tvars_[s], e,
                                               j % 2 == 0 ? Rational(1) : Rational(-1));
                }
                esub_[s].push_back(sub);
            }
            // t^p for p < m, seeds for the reduction table
            for (int p = 0; p < m; ++p) {
                Exp e(m + 1, 0);
                e[0] = p;
                tpow_[s].push_back(MultiPoly::monomial(tvars_[s], e, Rational(1)));
            }
            for (int i = 0; i <= m; ++i)
                elem_[s].push_back(elem_sym(vars_, alphabet_[s], i));
        }
    }

    std::map<Exp, MultiPoly> expand(const MultiPoly& p, int s) {
        std::map<Exp, MultiPoly> out;
        if (p.is_zero()) return out;
        if (s == a_ - 1) {
            out.emplace(Exp(a_, 0), p);
            return out;
        }
        const int m = a_ - s;
        // split p into layers by the power of x_{s+1}
        std::map<int, MultiPoly> layers;
        for (const auto& [e, c] : p.terms()) {
            Exp rest = e;
            int t_out = rest[s];
            rest[s] = 0;
            auto [it, fresh] =
                layers.try_emplace(t_out, MultiPoly::constant(vars_, Rational(0)));
            it->second.add_term(rest, c);
        }
        std::vector<std::string> fvars;
        for (int i = 1; i < m; ++i) fvars.push_back("F" + std::to_string(i));
        for (const auto& [t_out, g] : layers) {
            for (const auto& [sub_exp, coeff] : expand(g, s + 1)) {
                MultiPoly fe = symmetric_to_elementary(coeff, alphabet_[s + 1], fvars);
                // rewrite in t = x_{s+1} and the elementaries of x_{s+1}..x_a
                MultiPoly q = MultiPoly::constant(tvars_[s], Rational(0));
                for (const auto& [fexp, fc] : fe.terms()) {
                    MultiPoly prod = MultiPoly::constant(tvars_[s], fc);
                    for (int i = 0; i < m - 1; ++i)
                        if (fexp[i] > 0) prod = prod * esub_[s][i].pow(fexp[i]);
                    q += prod;
                }
                Exp shift(m + 1, 0);
                shift[0] = t_out;
                q = q.mul_monomial(shift, Rational(1));
                // reduce powers of t below m
                MultiPoly red = MultiPoly::constant(tvars_[s], Rational(0));
                for (const auto& [qe, qc] : q.terms()) {
                    Exp rest = qe;
                    int tp = rest[0];
                    rest[0] = 0;
                    red += reduced_tpow(s, tp).mul_monomial(rest, qc);
                }
                // read off staircase exponents and symmetric coefficients
                for (const auto& [re, rc] : red.terms()) {
                    Exp key = sub_exp;
                    key[s] = re[0];
                    MultiPoly piece = MultiPoly::constant(vars_, rc);
                    for (int i = 1; i <= m; ++i)
                        if (re[i] > 0) piece = piece * elem_[s][i].pow(re[i]);
                    auto [it, fresh] =
                        out.try_emplace(key, MultiPoly::constant(vars_, Rational(0)));
                    it->second += piece;
                }
            }
        }
        for (auto it = out.begin(); it != out.end();) {
            if (it->second.is_zero())
                it = out.erase(it);
            else
                ++it;
        }
        return out;
    }

private:
    const MultiPoly& reduced_tpow(int s, int p) {
        const int m = a_ - s;
        auto& table = tpow_[s];
        while (static_cast<int>(table.size()) <= p) {
            // t * (previous power), then t^m -> sum_i (-1)^{i-1} E_i t^{m-i}
            Exp tshift(m + 1, 0);
            tshift[0] = 1;
            MultiPoly raw = table.back().mul_monomial(tshift, Rational(1));
            MultiPoly red = MultiPoly::constant(tvars_[s], Rational(0));
            for (const auto& [e, c] : raw.terms()) {
                if (e[0] < m) {
                    red.add_term(e, c);
                    continue;
                }
                Exp rest = e;
                rest[0] = 0;
                for (int i = 1; i <= m; ++i) {
                    Exp r(m + 1, 0);
                    r[0] = m - i;
                    r[i] = 1;
                    red += MultiPoly::monomial(tvars_[s], r,
                                               i % 2 == 1 ? Rational(1) : Rational(-1))
                               .mul_monomial(rest, c);
                }
            }
            table.push_back(red);
        }
        return table[p];
    }

    int a_;
    std::vector<std::string> vars_;
    std::vector<std::vector<int>> alphabet_;
    std::vector<std::vector<std::string>> tvars_;
    std::vector<std::vector<MultiPoly>> esub_;
    std::vector<std::vector<MultiPoly>> tpow_;
    std::vector<std::vector<MultiPoly>> elem_;
};

NHWord polynomial_word(int a, const MultiPoly& p) {
    NHWord w(a);
    for (const auto& [e, c] : p.terms()) {
        NHWord mono = NHWord::identity(a).scaled(c);
        for (int i = 0; i < a; ++i)
            if (e[i] > 0) mono = mono * NHWord::xi(a, i + 1).pow(e[i]);
        w = w + mono;
    }
    return w;
}

} // namespace

PolyMat theta(int a, const NHWord& w) {
    if (w.strands() != a) throw VariableMismatch("strand count mismatch");
    auto vars = make_vars(a);
    std::vector<Exp> basis = theta_basis(a);
    std::map<Exp, int> index;
    for (size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<int>(i));
    int n = static_cast<int>(basis.size());
    PolyMat M(n, n, vars);
    StaircaseExpander ex(a);
    for (int j = 0; j < n; ++j) {
        MultiPoly img = w.apply(MultiPoly::monomial(vars, basis[j], Rational(1)));
        for (const auto& [e, coeff] : ex.expand(img, 0)) {
            auto it = index.find(e);
            if (it == index.end()) throw CheckFailure("expansion left the staircase basis");
            M.at(it->second, j) = coeff;
        }
    }
    return M;
}

PolyMat theta_xi1_companion(int a) {
    auto vars = make_vars(a);
    auto alph = full_alphabet(vars);
    PolyMat block(a, a, vars);
    for (int i = 0; i < a; ++i) {
        MultiPoly ei = elem_sym(vars, alph, i + 1);
        block.at(i, 0) = (i % 2 == 0) ? ei : ei.scaled(Rational(-1));
    }
    for (int i = 0; i + 1 < a; ++i)
        block.at(i, i + 1) = MultiPoly::constant(vars, Rational(1));
    return assemble_blocks(a, block);
}

PolyMat b_recursion_oracle(int a, int k) {
    auto vars = make_vars(a);
    auto alph = full_alphabet(vars);
    auto h = [&](int d) {
        return d < 0 ? MultiPoly::constant(vars, Rational(0)) : comp_sym(vars, alph, d);
    };
    PolyMat b(a, a, vars);
    for (int j = 1; j <= a; ++j) {
        if (j > k) {
            for (int i = 1; i <= a; ++i)
                if (i + k == j) b.at(i - 1, j - 1) = MultiPoly::constant(vars, Rational(1));
            continue;
        }
        for (int i = 1; i <= a; ++i) {
            MultiPoly v = h(k + i - j);
            for (int l = 1; l < i; ++l) v -= h(i - l) * b.at(l - 1, j - 1);
            b.at(i - 1, j - 1) = v;
        }
    }
    return b;
}

PolyMat assemble_blocks(int a, const PolyMat& block) {
    if (block.rows() != a || block.cols() != a)
        throw Error("block shape mismatch");
    int n = static_cast<int>(factorial(a));
    PolyMat out(n, n, block.vars());
    for (int q = 0; q < n / a; ++q)
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j) out.at(q * a + i, q * a + j) = block.at(i, j);
    return out;
}

PolyMat theta_char_poly(int a, const RootMultiset& sigma) {
    const int N = sigma.size();
    PolyMat M = theta(a, NHWord::xi(a, 1));
    std::vector<PolyMat> powers;
    powers.push_back(PolyMat::identity(M.rows(), M.vars()));
    for (int k = 1; k <= N; ++k) powers.push_back(powers.back() * M);
    PolyMat C(M.rows(), M.cols(), M.vars());
    for (int l = 0; l <= N; ++l) {
        Rational c = sigma.elementary(l);
        if (l % 2 == 1) c = -c;
        if (c == Rational(0)) continue;
        C = C + powers[N - l].scaled(c);
    }
    return C;
}

NHCheckReport check_relations(int a, int degree_bound) {
    NHCheckReport rep;
    NHWord one = NHWord::identity(a);
    NHWord zero(a);
    auto tag = [](const std::string& what, int i, int j) {
        std::string s = what + " (" + std::to_string(i);
        if (j > 0) s += "," + std::to_string(j);
        return s + ")";
    };
    for (int i = 1; i <= a; ++i)
        for (int j = i + 1; j <= a; ++j) {
            NHWord lhs = NHWord::xi(a, i) * NHWord::xi(a, j);
            NHWord rhs = NHWord::xi(a, j) * NHWord::xi(a, i);
            if (!lhs.equals_on_degree(rhs, degree_bound))
                rep.fail(tag("xi commutation", i, j));
        }
    for (int j = 1; j < a; ++j)
        for (int i = 1; i <= a; ++i) {
            if (i == j || i == j + 1) continue;
            NHWord lhs = NHWord::xi(a, i) * NHWord::del(a, j);
            NHWord rhs = NHWord::del(a, j) * NHWord::xi(a, i);
            if (!lhs.equals_on_degree(rhs, degree_bound))
                rep.fail(tag("distant xi del commutation", i, j));
        }
    for (int i = 1; i < a; ++i) {
        NHWord d = NHWord::del(a, i);
        if (!(d * d).equals_on_degree(zero, degree_bound))
            rep.fail(tag("del squares to zero", i, 0));
    }
    for (int i = 1; i + 1 < a; ++i) {
        NHWord di = NHWord::del(a, i), dj = NHWord::del(a, i + 1);
        if (!(di * dj * di).equals_on_degree(dj * di * dj, degree_bound))
            rep.fail(tag("del braid relation", i, 0));
    }
    for (int i = 1; i < a; ++i) {
        NHWord lhs = NHWord::xi(a, i) * NHWord::del(a, i) -
                     NHWord::del(a, i) * NHWord::xi(a, i + 1);
        if (!lhs.equals_on_degree(one, degree_bound))
            rep.fail(tag("left straightening", i, 0));
        NHWord rhs = NHWord::del(a, i) * NHWord::xi(a, i) -
                     NHWord::xi(a, i + 1) * NHWord::del(a, i);
        if (!rhs.equals_on_degree(one, degree_bound))
            rep.fail(tag("right straightening", i, 0));
    }
    return rep;
}

DeformedQuotientReport deformed_quotient_check(int a, const RootMultiset& sigma) {
    const int N = sigma.size();
    if (a < 1) throw Error("need at least one strand");
    if (a > N)
        throw Error("deformed quotient needs a <= N, got a=" + std::to_string(a) +
                    " with N=" + std::to_string(N));
    DeformedQuotientReport rep;
    rep.center_dim = binomial(N, a);
    rep.matrix_dim = factorial(a) * factorial(a) * binomial(N, a);

    auto vars = make_vars(a);
    auto alph = full_alphabet(vars);

    PolyMat M = theta(a, NHWord::xi(a, 1));
    if (!(M == theta_xi1_companion(a)))
        rep.fail("theta(xi_1) does not match its companion form");

    // theta applied to P(xi_1) directly as an operator
    NHWord pword(a);
    for (int l = 0; l <= N; ++l) {
        Rational c = sigma.elementary(l);
        if (l % 2 == 1) c = -c;
        if (c == Rational(0)) continue;
        pword = pword + NHWord::xi(a, 1).pow(N - l).scaled(c);
    }
    PolyMat direct = theta(a, pword);
    if (!(direct == theta_char_poly(a, sigma)))
        rep.fail("theta(P(xi_1)) differs from the matching combination of theta(xi_1) powers");

    // all a x a diagonal blocks agree
    int copies = M.rows() / a;
    for (int q = 1; q < copies; ++q)
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j)
                if (direct.at(q * a + i, q * a + j) != direct.at(i, j)) {
                    rep.fail("blocks of theta(P(xi_1)) differ");
                    q = copies;
                    i = a;
                    break;
                }

    // first block row carries h_{N-j}(X - Sigma), j = 0..a-1
    std::vector<MultiPoly> gens;
    for (int j = 0; j < a; ++j) {
        MultiPoly expected = h_diff(vars, alph, N - j, sigma);
        if (direct.at(0, j) != expected)
            rep.fail("first row entry " + std::to_string(j) +
                     " is not the expected complete symmetric difference");
        gens.push_back(expected);
    }
    Ideal relations(gens);
    for (int i = 1; i < a; ++i)
        for (int j = 0; j < a; ++j)
            if (!relations.normal_form(direct.at(i, j)).is_zero()) {
                rep.fail("entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") does not vanish modulo the first-row relations");
            }

    // dimension of the symmetric quotient, computed in elementary coordinates
    auto evars = make_vars(a, "E");
    std::vector<MultiPoly> egens;
    for (int d = N - a + 1; d <= N; ++d)
        egens.push_back(h_diff_in_elementary(evars, a, d, sigma));
    Ideal center(egens);
    if (!center.is_finite_dimensional()) {
        rep.fail("symmetric quotient is not finite dimensional");
    } else {
        long dim = static_cast<long>(center.standard_monomials().size());
        if (dim != rep.center_dim)
            rep.fail("symmetric quotient dimension " + std::to_string(dim) +
                     " differs from the expected " + std::to_string(rep.center_dim));
    }
    return rep;
}

bool check_explosion(int a, const Partition& alpha, int degree_bound) {
    auto vars = make_vars(a);
    NHWord ea = e_a_word(a);
    NHWord lhs = polynomial_word(a, schur_sym(vars, full_alphabet(vars), alpha)) * ea;
    NHWord xi_alpha = NHWord::identity(a);
    for (int i = 0; i < alpha.length(); ++i)
        xi_alpha = xi_alpha * NHWord::xi(a, i + 1).pow(alpha.part(i));
    NHWord rhs = ea * xi_alpha * ea;
    return lhs.equals_on_degree(rhs, degree_bound);
}

} // namespace dlh
