#include "dlh/symfn.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "dlh/error.hpp"

namespace dlh {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw Error("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw Error("partition parts must be weakly decreasing");
    }
}

Partition Partition::parse(const std::string& text) {
    std::string s = text;
    std::erase_if(s, [](char c) { return c == ' '; });
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ParseError("partition must look like [3,1,1]");
    s = s.substr(1, s.size() - 2);
    std::vector<int> parts;
    if (!s.empty()) {
        std::istringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) throw ParseError("empty partition entry");
            parts.push_back(std::stoi(tok));
        }
    }
    return Partition(std::move(parts));
}

long Partition::size() const {
    return std::accumulate(parts_.begin(), parts_.end(), 0L);
}

Partition Partition::conjugate() const {
    std::vector<int> out;
    for (int col = 1; col <= part(0); ++col) {
        int cnt = 0;
        for (int p : parts_)
            if (p >= col) ++cnt;
        out.push_back(cnt);
    }
    return Partition(std::move(out));
}

bool Partition::fits_in_box(int rows, int cols) const {
    return length() <= rows && part(0) <= cols;
}

std::string Partition::str() const {
    std::string s = "[";
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(parts_[i]);
    }
    return s + "]";
}

Partition box_complement(const Partition& a, int rows, int cols) {
    if (!a.fits_in_box(rows, cols)) throw Error("partition does not fit in the box");
    std::vector<int> out(rows);
    for (int i = 0; i < rows; ++i) out[i] = cols - a.part(rows - 1 - i);
    return Partition(std::move(out));
}

std::vector<Partition> partitions_in_box(int rows, int cols) {
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int remaining_rows, int max_part) {
        out.push_back(Partition(cur));
        if (remaining_rows == 0) return;
        for (int p = max_part; p >= 1; --p) {
            cur.push_back(p);
            rec(remaining_rows - 1, p);
            cur.pop_back();
        }
    };
    // Collect then re-sort by (size, lex).
    rec(rows, cols);
    std::sort(out.begin(), out.end(), [](const Partition& x, const Partition& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x.parts() < y.parts();
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Partition> partitions_of(int d, int max_len, int max_part) {
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int remaining, int max_next) {
        if (remaining == 0) {
            out.push_back(Partition(cur));
            return;
        }
        if (static_cast<int>(cur.size()) >= max_len) return;
        for (int p = std::min(remaining, max_next); p >= 1; --p) {
            cur.push_back(p);
            rec(remaining - p, p);
            cur.pop_back();
        }
    };
    rec(d, std::min(max_part, d));
    return out;
}

RootMultiset::RootMultiset(std::vector<Rational> roots) : roots_(std::move(roots)) {
    std::sort(roots_.begin(), roots_.end());
    for (const auto& r : roots_) {
        if (!distinct_.empty() && distinct_.back() == r) {
            ++mult_.back();
        } else {
            distinct_.push_back(r);
            mult_.push_back(1);
        }
    }
}

RootMultiset RootMultiset::parse(const std::string& text) {
    std::vector<Rational> roots;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::erase_if(tok, [](char c) { return c == ' '; });
        if (tok.empty()) throw ParseError("empty root entry");
        roots.push_back(Rational::parse(tok));
    }
    if (roots.empty()) throw ParseError("root multiset must be nonempty");
    return RootMultiset(std::move(roots));
}

Rational RootMultiset::elementary(int i) const {
    if (i < 0 || i > size()) return Rational(0);
    std::vector<Rational> e(size() + 1);
    e[0] = Rational(1);
    int used = 0;
    for (const auto& r : roots_) {
        ++used;
        for (int k = used; k >= 1; --k) e[k] += r * e[k - 1];
    }
    return e[i];
}

UniPoly RootMultiset::char_poly() const { return UniPoly::from_roots(roots_); }

bool RootMultiset::contains(const RootMultiset& sub) const {
    for (int j = 0; j < sub.num_distinct(); ++j) {
        auto it = std::find(distinct_.begin(), distinct_.end(), sub.distinct_[j]);
        if (it == distinct_.end()) return false;
        if (mult_[it - distinct_.begin()] < sub.mult_[j]) return false;
    }
    return true;
}

RootMultiset RootMultiset::minus(const RootMultiset& sub) const {
    if (!contains(sub)) throw Error("not a sub-multiset");
    std::vector<Rational> out;
    std::vector<Rational> rem = sub.roots_;
    for (const auto& r : roots_) {
        auto it = std::find(rem.begin(), rem.end(), r);
        if (it != rem.end())
            rem.erase(it);
        else
            out.push_back(r);
    }
    return RootMultiset(std::move(out));
}

RootMultiset RootMultiset::merged(const RootMultiset& other) const {
    std::vector<Rational> out = roots_;
    out.insert(out.end(), other.roots_.begin(), other.roots_.end());
    return RootMultiset(std::move(out));
}

bool RootMultiset::disjoint_from(const RootMultiset& other) const {
    for (const auto& r : distinct_)
        if (std::find(other.distinct_.begin(), other.distinct_.end(), r) !=
            other.distinct_.end())
            return false;
    return true;
}

std::vector<RootMultiset> RootMultiset::multisubsets(int k) const {
    std::vector<RootMultiset> out;
    if (k < 0 || k > size()) return out;
    std::vector<Rational> cur;
    std::function<void(int, int)> rec = [&](size_t j, int remaining) {
        if (remaining == 0) {
            out.push_back(RootMultiset(cur));
            return;
        }
        if (j >= distinct_.size()) return;
        int take_max = std::min(mult_[j], remaining);
        for (int t = take_max; t >= 0; --t) {
            for (int s = 0; s < t; ++s) cur.push_back(distinct_[j]);
            rec(j + 1, remaining - t);
            for (int s = 0; s < t; ++s) cur.pop_back();
        }
    };
    if (k == 0) {
        out.push_back(RootMultiset(std::vector<Rational>{}));
        return out;
    }
    rec(0, k);
    return out;
}

std::string RootMultiset::str() const {
    std::string s;
    for (size_t i = 0; i < roots_.size(); ++i) {
        if (i) s += ",";
        s += roots_[i].str();
    }
    return s;
}

std::vector<int> full_alphabet(const std::vector<std::string>& vars) {
    std::vector<int> a(vars.size());
    std::iota(a.begin(), a.end(), 0);
    return a;
}

MultiPoly elem_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet,
                   int k) {
    int a = static_cast<int>(alphabet.size());
    if (k < 0 || k > a) return MultiPoly::constant(vars, Rational(0));
    if (k == 0) return MultiPoly::constant(vars, Rational(1));
    MultiPoly out = MultiPoly::constant(vars, Rational(0));
    std::vector<int> idx(k);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == k) {
            Exp e(vars.size(), 0);
            for (int i : idx) e[alphabet[i]] = 1;
            out.add_term(e, Rational(1));
            return;
        }
        for (int i = start; i < a; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    return out;
}

MultiPoly comp_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet,
                   int k) {
    int a = static_cast<int>(alphabet.size());
    if (k < 0) return MultiPoly::constant(vars, Rational(0));
    if (k == 0) return MultiPoly::constant(vars, Rational(1));
    if (a == 0) return MultiPoly::constant(vars, Rational(0));
    MultiPoly out = MultiPoly::constant(vars, Rational(0));
    Exp e(vars.size(), 0);
    std::function<void(int, int)> rec = [&](int var_pos, int remaining) {
        if (var_pos == a - 1) {
            e[alphabet[var_pos]] = remaining;
            out.add_term(e, Rational(1));
            e[alphabet[var_pos]] = 0;
            return;
        }
        for (int d = 0; d <= remaining; ++d) {
            e[alphabet[var_pos]] = d;
            rec(var_pos + 1, remaining - d);
        }
        e[alphabet[var_pos]] = 0;
    };
    rec(0, k);
    return out;
}

MultiPoly power_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet,
                    int k) {
    if (k == 0)
        return MultiPoly::constant(vars, Rational(static_cast<long>(alphabet.size())));
    MultiPoly out = MultiPoly::constant(vars, Rational(0));
    for (int v : alphabet) {
        Exp e(vars.size(), 0);
        e[v] = k;
        out.add_term(e, Rational(1));
    }
    return out;
}

MultiPoly monomial_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet,
                       const Partition& p) {
    int a = static_cast<int>(alphabet.size());
    if (p.length() > a) return MultiPoly::constant(vars, Rational(0));
    std::vector<int> exps(a, 0);
    for (int i = 0; i < p.length(); ++i) exps[i] = p.part(i);
    std::sort(exps.begin(), exps.end());
    MultiPoly out = MultiPoly::constant(vars, Rational(0));
    do {
        Exp e(vars.size(), 0);
        for (int i = 0; i < a; ++i) e[alphabet[i]] = exps[i];
        out.add_term(e, Rational(1));
    } while (std::next_permutation(exps.begin(), exps.end()));
    return out;
}

MultiPoly vandermonde(const std::vector<std::string>& vars, const std::vector<int>& alphabet) {
    MultiPoly out = MultiPoly::constant(vars, Rational(1));
    for (size_t i = 0; i < alphabet.size(); ++i)
        for (size_t j = i + 1; j < alphabet.size(); ++j)
            out = out * (MultiPoly::variable(vars, alphabet[i]) -
                         MultiPoly::variable(vars, alphabet[j]));
    return out;
}

MultiPoly schur_sym(const std::vector<std::string>& vars, const std::vector<int>& alphabet,
                    const Partition& p) {
    int a = static_cast<int>(alphabet.size());
    if (p.length() > a) return MultiPoly::constant(vars, Rational(0));
    if (a == 0) return MultiPoly::constant(vars, Rational(1));
    std::vector<int> shape(a);
    for (int i = 0; i < a; ++i) shape[i] = p.part(i) + a - 1 - i;
    MultiPoly num = MultiPoly::constant(vars, Rational(0));
    std::vector<int> w(a);
    std::iota(w.begin(), w.end(), 0);
    do {
        int inv = 0;
        for (int i = 0; i < a; ++i)
            for (int j = i + 1; j < a; ++j)
                if (w[i] > w[j]) ++inv;
        Exp e(vars.size(), 0);
        for (int i = 0; i < a; ++i) e[alphabet[w[i]]] = shape[i];
        num.add_term(e, inv % 2 == 0 ? Rational(1) : Rational(-1));
    } while (std::next_permutation(w.begin(), w.end()));
    return num.exact_div(vandermonde(vars, alphabet));
}

MultiPoly h_diff(const std::vector<std::string>& vars, const std::vector<int>& alphabet, int k,
                 const RootMultiset& sigma) {
    MultiPoly out = MultiPoly::constant(vars, Rational(0));
    for (int i = 0; i <= k; ++i) {
        Rational c = sigma.elementary(i);
        if (c.is_zero()) continue;
        if (i % 2 == 1) c = -c;
        out += comp_sym(vars, alphabet, k - i).scaled(c);
    }
    return out;
}

bool is_symmetric_in(const MultiPoly& f, const std::vector<int>& alphabet) {
    int n = f.nvars();
    for (size_t i = 0; i + 1 < alphabet.size(); ++i) {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[alphabet[i]], perm[alphabet[i + 1]]);
        if (f.apply_permutation(perm) != f) return false;
    }
    return true;
}

std::map<Partition, Rational> schur_expansion(const MultiPoly& f,
                                              const std::vector<int>& alphabet) {
    if (!is_symmetric_in(f, alphabet))
        throw CheckFailure("polynomial is not symmetric in the alphabet");
    std::map<Partition, Rational> out;
    MultiPoly rem = f;
    while (!rem.is_zero()) {
        Exp le = rem.leading_exp();
        std::vector<int> parts;
        for (size_t i = 0; i < alphabet.size(); ++i) parts.push_back(le[alphabet[i]]);
        for (size_t i = 0; i < le.size(); ++i) {
            bool in_alpha =
                std::find(alphabet.begin(), alphabet.end(), static_cast<int>(i)) !=
                alphabet.end();
            if (!in_alpha && le[i] != 0)
                throw CheckFailure("polynomial involves variables outside the alphabet");
        }
        std::sort(parts.begin(), parts.end(), std::greater<int>());
        Partition p(parts);
        Rational c = rem.leading_coeff();
        out[p] += c;
        rem -= schur_sym(rem.vars(), alphabet, p).scaled(c);
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

long lr_coeff(const Partition& a, const Partition& b, const Partition& c) {
    if (a.size() + b.size() != c.size()) return 0;
    int m = std::max(a.length() + b.length(), 1);
    if (c.length() > m) return 0;
    auto vars = make_vars(m);
    auto alpha = full_alphabet(vars);
    MultiPoly prod = schur_sym(vars, alpha, a) * schur_sym(vars, alpha, b);
    auto exp = schur_expansion(prod, alpha);
    auto it = exp.find(c);
    if (it == exp.end()) return 0;
    if (!it->second.is_integer()) throw CheckFailure("non-integral Schur coefficient");
    return it->second.num().get_si();
}

MultiPoly symmetric_to_elementary(const MultiPoly& f, const std::vector<int>& alphabet,
                                  const std::vector<std::string>& evars) {
    int a = static_cast<int>(alphabet.size());
    if (static_cast<int>(evars.size()) < a)
        throw Error("need one elementary coordinate per alphabet variable");
    if (!is_symmetric_in(f, alphabet))
        throw CheckFailure("polynomial is not symmetric in the alphabet");
    std::vector<MultiPoly> e;
    for (int i = 1; i <= a; ++i) e.push_back(elem_sym(f.vars(), alphabet, i));
    MultiPoly rem = f;
    MultiPoly out = MultiPoly::constant(evars, Rational(0));
    while (!rem.is_zero()) {
        Exp le = rem.leading_exp();
        std::vector<int> lambda;
        for (int i = 0; i < a; ++i) lambda.push_back(le[alphabet[i]]);
        std::sort(lambda.begin(), lambda.end(), std::greater<int>());
        for (size_t i = 0; i < le.size(); ++i) {
            bool in_alpha =
                std::find(alphabet.begin(), alphabet.end(), static_cast<int>(i)) !=
                alphabet.end();
            if (!in_alpha && le[i] != 0)
                throw CheckFailure("polynomial involves variables outside the alphabet");
        }
        // Leading term of e_1^{l1-l2} e_2^{l2-l3} ... e_a^{la} matches le.
        Exp ee(evars.size(), 0);
        MultiPoly prod = MultiPoly::constant(f.vars(), Rational(1));
        for (int i = 0; i < a; ++i) {
            int d = lambda[i] - (i + 1 < a ? lambda[i + 1] : 0);
            ee[i] = d;
            for (int t = 0; t < d; ++t) prod = prod * e[i];
        }
        Rational c = rem.leading_coeff();
        out.add_term(ee, c);
        rem -= prod.scaled(c);
    }
    return out;
}

MultiPoly comp_in_elementary(const std::vector<std::string>& evars, int a, int k) {
    if (k < 0) return MultiPoly::constant(evars, Rational(0));
    std::vector<MultiPoly> h;
    h.push_back(MultiPoly::constant(evars, Rational(1)));
    for (int d = 1; d <= k; ++d) {
        MultiPoly acc = MultiPoly::constant(evars, Rational(0));
        for (int i = 1; i <= std::min(a, d); ++i) {
            MultiPoly ei = MultiPoly::variable(evars, i - 1);
            MultiPoly term = ei * h[d - i];
            if (i % 2 == 0) term = -term;
            acc += term;
        }
        h.push_back(acc);
    }
    return h[k];
}

MultiPoly h_diff_in_elementary(const std::vector<std::string>& evars, int a, int k,
                               const RootMultiset& sigma) {
    MultiPoly out = MultiPoly::constant(evars, Rational(0));
    for (int i = 0; i <= k; ++i) {
        Rational c = sigma.elementary(i);
        if (c.is_zero()) continue;
        if (i % 2 == 1) c = -c;
        out += comp_in_elementary(evars, a, k - i).scaled(c);
    }
    return out;
}

Partition split_partner(const Partition& p, int rows, int cols) {
    return box_complement(p, rows, cols).conjugate();
}

MultiPoly split_unit_sum(int a, int b) {
    std::vector<std::string> vars;
    for (int i = 1; i <= a; ++i) vars.push_back("x" + std::to_string(i));
    for (int i = 1; i <= b; ++i) vars.push_back("y" + std::to_string(i));
    std::vector<int> X, Y;
    for (int i = 0; i < a; ++i) X.push_back(i);
    for (int i = 0; i < b; ++i) Y.push_back(a + i);
    MultiPoly out = MultiPoly::constant(vars, Rational(0));
    for (const auto& p : partitions_in_box(a, b)) {
        Partition q = split_partner(p, a, b);
        MultiPoly term = schur_sym(vars, X, p) * schur_sym(vars, Y, q);
        long sign = (static_cast<long>(a) * b - p.size()) % 2;
        out += sign == 0 ? term : -term;
    }
    return out;
}

Rational split_unit_value(const RootMultiset& A, const RootMultiset& B) {
    Rational v(1);
    for (const auto& lam : A.roots())
        for (const auto& mu : B.roots()) v = v * (mu - lam);
    if ((A.size() * B.size()) % 2 == 1) v = -v;
    return v;
}

} // namespace dlh
