#include "dlh/poly.hpp"
#include "dlh/polymat.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <sstream>

namespace dlh {

int exp_degree(const Exp& e) { return std::accumulate(e.begin(), e.end(), 0); }

Exp exp_add(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

bool exp_divides(const Exp& a, const Exp& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Exp exp_sub(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Exp exp_lcm(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

bool GrevlexLess::operator()(const Exp& a, const Exp& b) const {
    int da = exp_degree(a), db = exp_degree(b);
    if (da != db) return da < db;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

MultiPoly MultiPoly::constant(const std::vector<std::string>& vars, const Rational& c) {
    MultiPoly p(vars);
    if (!c.is_zero()) p.terms_.emplace(Exp(vars.size(), 0), c);
    return p;
}

MultiPoly MultiPoly::variable(const std::vector<std::string>& vars, int index) {
    MultiPoly p(vars);
    Exp e(vars.size(), 0);
    e.at(index) = 1;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

MultiPoly MultiPoly::monomial(const std::vector<std::string>& vars, const Exp& e, const Rational& c) {
    MultiPoly p(vars);
    if (e.size() != vars.size()) throw Error("MultiPoly::monomial: exponent length mismatch");
    if (!c.is_zero()) p.terms_.emplace(e, c);
    return p;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && exp_degree(terms_.begin()->first) == 0);
}

Rational MultiPoly::constant_term() const {
    Exp zero(vars_.size(), 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? Rational(0) : it->second;
}

int MultiPoly::degree() const {
    if (terms_.empty()) return -1;
    return exp_degree(terms_.rbegin()->first);
}

const Exp& MultiPoly::leading_exp() const {
    if (terms_.empty()) throw Error("leading_exp of zero polynomial");
    return terms_.rbegin()->first;
}

const Rational& MultiPoly::leading_coeff() const {
    if (terms_.empty()) throw Error("leading_coeff of zero polynomial");
    return terms_.rbegin()->second;
}

Rational MultiPoly::coeff(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void MultiPoly::add_term(const Exp& e, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void MultiPoly::check_same_vars(const MultiPoly& o) const {
    if (vars_ != o.vars_)
        throw VariableMismatch("polynomials over different variable lists");
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    check_same_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    check_same_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_same_vars(b);
    MultiPoly r(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_)
            r.add_term(exp_add(ea, eb), ca * cb);
    return r;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly r(vars_);
    if (c.is_zero()) return r;
    for (const auto& [e, tc] : terms_) r.terms_.emplace(e, tc * c);
    return r;
}

MultiPoly MultiPoly::mul_monomial(const Exp& e, const Rational& c) const {
    MultiPoly r(vars_);
    if (c.is_zero()) return r;
    for (const auto& [te, tc] : terms_) r.terms_.emplace(exp_add(te, e), tc * c);
    return r;
}

MultiPoly MultiPoly::pow(int e) const {
    if (e < 0) throw Error("MultiPoly::pow: negative exponent");
    MultiPoly r = constant(vars_, Rational(1));
    MultiPoly base = *this;
    for (; e > 0; e >>= 1) {
        if (e & 1) r *= base;
        if (e > 1) base *= base;
    }
    return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
}

MultiPoly MultiPoly::exact_div(const MultiPoly& g) const {
    check_same_vars(g);
    if (g.is_zero()) throw Error("exact_div: division by zero polynomial");
    MultiPoly rem = *this;
    MultiPoly quot(vars_);
    const Exp& glead = g.leading_exp();
    const Rational& gc = g.leading_coeff();
    while (!rem.is_zero()) {
        const Exp& rl = rem.leading_exp();
        if (!exp_divides(glead, rl))
            throw CheckFailure("exact_div: not an exact multiple");
        Exp q = exp_sub(rl, glead);
        Rational qc = rem.leading_coeff() / gc;
        quot.add_term(q, qc);
        rem -= g.mul_monomial(q, qc);
    }
    return quot;
}

Rational MultiPoly::evaluate(const std::vector<Rational>& point) const {
    if (point.size() != vars_.size()) throw Error("evaluate: wrong point size");
    Rational total(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t *= point[i].pow(e[i]);
        total += t;
    }
    return total;
}

MultiPoly MultiPoly::substitute(int var_index, const MultiPoly& value) const {
    check_same_vars(value);
    // Cache powers of the replacement.
    std::vector<MultiPoly> powers{constant(vars_, Rational(1))};
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        int k = e.at(var_index);
        while (static_cast<int>(powers.size()) <= k)
            powers.push_back(powers.back() * value);
        Exp rest = e;
        rest[var_index] = 0;
        r += powers[k].mul_monomial(rest, c);
    }
    return r;
}

MultiPoly MultiPoly::substitute_values(const std::map<int, Rational>& values) const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        Rational coeff = c;
        Exp rest = e;
        for (const auto& [idx, val] : values) {
            if (e.at(idx) > 0) coeff *= val.pow(e[idx]);
            rest[idx] = 0;
        }
        r.add_term(rest, coeff);
    }
    return r;
}

MultiPoly MultiPoly::lift_to(const std::vector<std::string>& bigger) const {
    std::vector<int> slot(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(bigger.begin(), bigger.end(), vars_[i]);
        if (it == bigger.end())
            throw VariableMismatch("lift_to: variable " + vars_[i] + " missing from target list");
        slot[i] = static_cast<int>(it - bigger.begin());
    }
    MultiPoly r(bigger);
    for (const auto& [e, c] : terms_) {
        Exp ne(bigger.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) ne[slot[i]] = e[i];
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

MultiPoly MultiPoly::drop_unused() const {
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_) {
        (void)c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) used[i] = true;
    }
    std::vector<std::string> nv;
    std::vector<int> keep;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) {
            nv.push_back(vars_[i]);
            keep.push_back(static_cast<int>(i));
        }
    MultiPoly r(nv);
    for (const auto& [e, c] : terms_) {
        Exp ne(keep.size());
        for (size_t i = 0; i < keep.size(); ++i) ne[i] = e[keep[i]];
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

MultiPoly MultiPoly::apply_transposition(int i) const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        Exp ne = e;
        std::swap(ne.at(i), ne.at(i + 1));
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

MultiPoly MultiPoly::apply_permutation(const std::vector<int>& perm) const {
    if (perm.size() != vars_.size()) throw Error("apply_permutation: size mismatch");
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        Exp ne(e.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) ne[perm[i]] = e[i];
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

bool MultiPoly::is_symmetric() const {
    for (int i = 0; i + 1 < nvars(); ++i)
        if (apply_transposition(i) != *this) return false;
    return true;
}

namespace {

void print_monomial(std::ostream& os, const std::vector<std::string>& vars, const Exp& e,
                    const Rational& c) {
    Rational a = c.sign() < 0 ? -c : c;
    bool unit_coeff = a.is_one();
    bool has_vars = exp_degree(e) > 0;
    if (!has_vars || !unit_coeff) os << a.str();
    bool first = !has_vars || !unit_coeff ? false : true;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!first || !unit_coeff || !has_vars) {
            if (!(first && unit_coeff)) os << "*";
        }
        first = false;
        os << vars[i];
        if (e[i] > 1) os << "^" << e[i];
    }
}

} // namespace

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

std::string MultiPoly::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiPoly& p) {
    if (p.is_zero()) return os << "0";
    bool first = true;
    // Print in descending grevlex order.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        if (first) {
            if (c.sign() < 0) os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        print_monomial(os, p.vars(), e, c);
    }
    return os;
}

namespace {

struct Lexer {
    const std::string& s;
    size_t i = 0;
    explicit Lexer(const std::string& str) : s(str) {}
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    char take() {
        skip_ws();
        return s[i++];
    }
};

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

} // namespace

MultiPoly MultiPoly::parse(const std::string& text, const std::vector<std::string>& vars) {
    Lexer lx(text);
    MultiPoly result(vars);
    bool expect_term = true;
    int sign = 1;
    if (lx.done()) throw ParseError("empty polynomial text");
    while (!lx.done()) {
        char c = lx.peek();
        if (c == '+' || c == '-') {
            lx.take();
            if (expect_term && c == '-') sign = -sign;
            else if (expect_term) { /* unary plus */ }
            else {
                sign = c == '-' ? -1 : 1;
                expect_term = true;
            }
            continue;
        }
        if (!expect_term) throw ParseError("expected '+' or '-' near position " + std::to_string(lx.i));
        // One monomial: factors joined by '*'.
        Rational coeff(sign);
        sign = 1;
        Exp e(vars.size(), 0);
        bool saw_factor = false;
        while (true) {
            char f = lx.peek();
            if (std::isdigit(static_cast<unsigned char>(f))) {
                std::string num;
                while (!lx.done() && (std::isdigit(static_cast<unsigned char>(lx.peek())) || lx.peek() == '/')) {
                    char d = lx.take();
                    num += d;
                }
                coeff *= Rational::parse(num);
                saw_factor = true;
            } else if (std::isalpha(static_cast<unsigned char>(f)) || f == '_') {
                std::string name;
                while (!lx.done() && is_name_char(lx.peek())) name += lx.take();
                auto it = std::find(vars.begin(), vars.end(), name);
                if (it == vars.end()) throw ParseError("unknown variable '" + name + "'");
                int idx = static_cast<int>(it - vars.begin());
                int exp = 1;
                if (!lx.done() && lx.peek() == '^') {
                    lx.take();
                    std::string digits;
                    while (!lx.done() && std::isdigit(static_cast<unsigned char>(lx.peek())))
                        digits += lx.take();
                    if (digits.empty()) throw ParseError("missing exponent after '^'");
                    exp = std::stoi(digits);
                }
                e[idx] += exp;
                saw_factor = true;
            } else {
                throw ParseError(std::string("unexpected character '") + f + "'");
            }
            if (!lx.done() && lx.peek() == '*') {
                lx.take();
                continue;
            }
            break;
        }
        if (!saw_factor) throw ParseError("empty monomial");
        result.add_term(e, coeff);
        expect_term = false;
    }
    if (expect_term) throw ParseError("dangling sign at end of polynomial");
    return result;
}

std::vector<std::string> make_vars(int n, const std::string& stem) {
    std::vector<std::string> v;
    v.reserve(n);
    for (int i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
    return v;
}

PolyMat::PolyMat(int rows, int cols, const std::vector<std::string>& vars)
    : r_(rows), c_(cols), vars_(vars),
      a_(static_cast<size_t>(rows) * cols, MultiPoly::constant(vars, Rational(0))) {}

PolyMat PolyMat::identity(int n, const std::vector<std::string>& vars) {
    PolyMat m(n, n, vars);
    for (int i = 0; i < n; ++i) m.at(i, i) = MultiPoly::constant(vars, Rational(1));
    return m;
}

PolyMat operator*(const PolyMat& a, const PolyMat& b) {
    if (a.c_ != b.r_) throw Error("polynomial matrix product shape mismatch");
    PolyMat out(a.r_, b.c_, a.vars_);
    for (int i = 0; i < a.r_; ++i)
        for (int k = 0; k < a.c_; ++k) {
            const MultiPoly& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < b.c_; ++j) {
                const MultiPoly& bkj = b.at(k, j);
                if (!bkj.is_zero()) out.at(i, j) += aik * bkj;
            }
        }
    return out;
}

PolyMat operator+(const PolyMat& a, const PolyMat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw Error("polynomial matrix sum shape mismatch");
    PolyMat out = a;
    for (size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += b.a_[i];
    return out;
}

PolyMat operator-(const PolyMat& a, const PolyMat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_)
        throw Error("polynomial matrix difference shape mismatch");
    PolyMat out = a;
    for (size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= b.a_[i];
    return out;
}

bool operator==(const PolyMat& a, const PolyMat& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
}

PolyMat PolyMat::scaled(const Rational& c) const {
    PolyMat out = *this;
    for (auto& p : out.a_) p = p.scaled(c);
    return out;
}

PolyMat PolyMat::pow(int k) const {
    if (r_ != c_) throw Error("power of non-square polynomial matrix");
    if (k < 0) throw Error("negative polynomial matrix power");
    PolyMat acc = identity(r_, vars_);
    PolyMat base = *this;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

bool PolyMat::is_zero() const {
    for (const auto& p : a_)
        if (!p.is_zero()) return false;
    return true;
}

} // namespace dlh
