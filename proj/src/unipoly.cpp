#include "dlh/unipoly.hpp"

#include <sstream>

namespace dlh {

UniPoly UniPoly::from_roots(const std::vector<Rational>& roots) {
    UniPoly p({Rational(1)});
    for (const auto& r : roots)
        p = p * UniPoly({-r, Rational(1)});
    return p;
}

Rational UniPoly::leading() const {
    if (c_.empty()) throw Error("leading of zero polynomial");
    return c_.back();
}

UniPoly UniPoly::operator-() const {
    std::vector<Rational> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(-x);
    return UniPoly(std::move(r));
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return UniPoly(std::move(r));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j)
            r[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(r));
}

UniPoly UniPoly::scaled(const Rational& s) const {
    std::vector<Rational> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(x * s);
    return UniPoly(std::move(r));
}

UniPoly UniPoly::monic() const {
    if (is_zero()) return *this;
    return scaled(leading().inv());
}

UniPoly UniPoly::pow(int e) const {
    if (e < 0) throw Error("UniPoly::pow: negative exponent");
    UniPoly r = constant(Rational(1));
    UniPoly base = *this;
    for (; e > 0; e >>= 1) {
        if (e & 1) r = r * base;
        if (e > 1) base = base * base;
    }
    return r;
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& d) const {
    if (d.is_zero()) throw Error("UniPoly: division by zero");
    UniPoly rem = *this;
    std::vector<Rational> q(std::max(0, degree() - d.degree() + 1), Rational(0));
    Rational dl = d.leading();
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
        int k = rem.degree() - d.degree();
        Rational f = rem.leading() / dl;
        q[k] = f;
        std::vector<Rational> sub(k, Rational(0));
        sub.insert(sub.end(), d.c_.begin(), d.c_.end());
        UniPoly s(std::move(sub));
        rem = rem - s.scaled(f);
    }
    return {UniPoly(std::move(q)), rem};
}

UniPoly UniPoly::gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = a.mod(b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

std::tuple<UniPoly, UniPoly, UniPoly> UniPoly::ext_gcd(const UniPoly& a, const UniPoly& b) {
    UniPoly r0 = a, r1 = b;
    UniPoly s0 = constant(Rational(1)), s1;
    UniPoly t0, t1 = constant(Rational(1));
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divmod(r1);
        UniPoly s2 = s0 - q * s1;
        UniPoly t2 = t0 - q * t1;
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Rational inv = r0.leading().inv();
    return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

UniPoly UniPoly::derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Rational> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return UniPoly(std::move(r));
}

UniPoly UniPoly::antiderivative() const {
    if (is_zero()) return UniPoly();
    std::vector<Rational> r(c_.size() + 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i)
        r[i + 1] = c_[i] / Rational(static_cast<long>(i + 1));
    return UniPoly(std::move(r));
}

Rational UniPoly::eval(const Rational& v) const {
    Rational acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * v + c_[i];
    return acc;
}

UniPoly UniPoly::shift(const Rational& s) const {
    // Horner with (x + s).
    UniPoly acc;
    UniPoly xs({s, Rational(1)});
    for (size_t i = c_.size(); i-- > 0;)
        acc = acc * xs + constant(c_[i]);
    return acc;
}

namespace {

std::vector<mpz_class> divisors(const mpz_class& n_in) {
    mpz_class n = abs(n_in);
    std::vector<mpz_class> divs;
    if (n == 0) return divs;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            mpz_class other = n / d;
            if (other != d) divs.push_back(other);
        }
    }
    return divs;
}

} // namespace

std::vector<std::pair<Rational, int>> UniPoly::rational_roots() const {
    std::vector<std::pair<Rational, int>> roots;
    if (is_zero()) return roots;
    UniPoly p = *this;
    // Strip powers of x, i.e. the root 0.
    int zero_mult = 0;
    while (!p.is_zero() && p.coeff(0).is_zero()) {
        std::vector<Rational> shifted(p.c_.begin() + 1, p.c_.end());
        p = UniPoly(std::move(shifted));
        ++zero_mult;
    }
    if (zero_mult > 0) roots.emplace_back(Rational(0), zero_mult);
    if (p.degree() < 1) return roots;
    // Clear denominators to an integer polynomial.
    mpz_class lcm_den(1);
    for (const auto& c : p.c_) lcm_den = lcm(lcm_den, c.den());
    std::vector<mpz_class> ic;
    ic.reserve(p.c_.size());
    for (const auto& c : p.c_) ic.push_back(c.num() * (lcm_den / c.den()));
    auto numers = divisors(ic.front());
    auto denoms = divisors(ic.back());
    std::vector<Rational> candidates;
    for (const auto& nu : numers)
        for (const auto& de : denoms) {
            mpq_class q(nu, de);
            q.canonicalize();
            candidates.push_back(Rational(q));
            candidates.push_back(Rational(mpq_class(-q)));
        }
    for (const auto& cand : candidates) {
        int mult = 0;
        while (p.degree() >= 1 && p.eval(cand).is_zero()) {
            UniPoly lin({-cand, Rational(1)});
            auto [q, r] = p.divmod(lin);
            if (!r.is_zero()) throw Error("rational_roots: deflation failed");
            p = q;
            ++mult;
        }
        if (mult > 0) roots.emplace_back(cand, mult);
        if (p.degree() < 1) break;
    }
    return roots;
}

MultiPoly UniPoly::to_multipoly(const std::vector<std::string>& vars, int var_index) const {
    MultiPoly r(vars);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        Exp e(vars.size(), 0);
        e.at(var_index) = static_cast<int>(i);
        r.add_term(e, c_[i]);
    }
    return r;
}

UniPoly UniPoly::from_multipoly(const MultiPoly& p, int var_index) {
    std::vector<Rational> c;
    for (const auto& [e, coeff] : p.terms()) {
        for (size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != var_index && e[i] != 0)
                throw Error("from_multipoly: polynomial is not univariate in the given variable");
        int k = e.at(var_index);
        if (static_cast<int>(c.size()) <= k) c.resize(k + 1, Rational(0));
        c[k] = coeff;
    }
    return UniPoly(std::move(c));
}

std::string UniPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        Rational a = c_[i].sign() < 0 ? -c_[i] : c_[i];
        if (first) {
            if (c_[i].sign() < 0) os << "-";
            first = false;
        } else {
            os << (c_[i].sign() < 0 ? " - " : " + ");
        }
        if (i == 0 || !a.is_one()) os << a.str();
        if (i > 0) {
            if (!a.is_one()) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

} // namespace dlh
