#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pql/rational.hpp"
#include "pql/symbols.hpp"

namespace pql {

/// Power product of jet variables; factors sorted by symbol, exponents >= 1.
struct Mono {
    std::vector<std::pair<Sym, int>> factors;

    static Mono one() { return {}; }
    static Mono var(const Sym& s, int e = 1) {
        Mono m;
        if (e != 0) m.factors.push_back({s, e});
        return m;
    }

    bool is_one() const { return factors.empty(); }

    int degree() const {
        int d = 0;
        for (auto& [s, e] : factors) d += e;
        return d;
    }

    int exponent(const Sym& s) const {
        for (auto& [x, e] : factors)
            if (x == s) return e;
        return 0;
    }

    Mono operator*(const Mono& o) const {
        Mono r;
        auto a = factors.begin(), b = o.factors.begin();
        while (a != factors.end() || b != o.factors.end()) {
            if (b == o.factors.end() || (a != factors.end() && a->first < b->first))
                r.factors.push_back(*a++);
            else if (a == factors.end() || b->first < a->first)
                r.factors.push_back(*b++);
            else {
                r.factors.push_back({a->first, a->second + b->second});
                ++a;
                ++b;
            }
        }
        return r;
    }

    bool divisible_by(const Mono& o) const {
        for (auto& [s, e] : o.factors)
            if (exponent(s) < e) return false;
        return true;
    }

    /// Requires divisibility.
    Mono divide(const Mono& o) const {
        Mono r;
        for (auto& [s, e] : factors) {
            int d = e - o.exponent(s);
            if (d < 0) throw std::logic_error("Mono: not divisible");
            if (d > 0) r.factors.push_back({s, d});
        }
        return r;
    }

    friend bool operator==(const Mono& a, const Mono& b) { return a.factors == b.factors; }
};

/// Canonical term order used throughout: ascending total degree, ties broken
/// so that within a degree the monomial with the higher exponent on the
/// earliest symbol comes first. This is a monomial order (multiplicative,
/// with 1 minimal), so the last map entry is a valid division leading term.
struct MonoBefore {
    bool operator()(const Mono& a, const Mono& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        auto i = a.factors.begin(), j = b.factors.begin();
        while (i != a.factors.end() && j != b.factors.end()) {
            if (i->first != j->first) {
                // whichever monomial uses the earlier symbol wins
                return i->first < j->first;
            }
            if (i->second != j->second) return i->second > j->second;
            ++i;
            ++j;
        }
        // equal prefixes with equal degrees: both exhausted simultaneously
        return false;
    }
};

/// Multivariate polynomial over Rat in jet variables. No zero coefficients
/// are stored; the term map order fixes a canonical form, so equality is
/// structural.
class Poly {
public:
    using Terms = std::map<Mono, Rat, MonoBefore>;

    Poly() = default;
    explicit Poly(Rat c) {
        if (!c.is_zero()) t_[Mono::one()] = std::move(c);
    }
    Poly(long long c) : Poly(Rat(c)) {}
    explicit Poly(const Sym& s) { t_[Mono::var(s)] = Rat(1); }
    Poly(Mono m, Rat c) {
        if (!c.is_zero()) t_[std::move(m)] = std::move(c);
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const {
        return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one());
    }
    Rat constant_value() const {
        if (t_.empty()) return Rat(0);
        if (!is_constant()) throw std::domain_error("Poly: not constant");
        return t_.begin()->second;
    }
    Rat coeff(const Mono& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? Rat(0) : it->second;
    }

    int total_degree() const {
        int d = 0;
        for (auto& [m, c] : t_) d = std::max(d, m.degree());
        return d;
    }

    std::set<Sym> symbols() const {
        std::set<Sym> r;
        for (auto& [m, c] : t_)
            for (auto& [s, e] : m.factors) r.insert(s);
        return r;
    }

    bool contains(const Sym& s) const {
        for (auto& [m, c] : t_)
            if (m.exponent(s) > 0) return true;
        return false;
    }

    void add_term(const Mono& m, const Rat& c) {
        if (c.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_[m] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r;
        for (auto& [m, c] : t_) r.t_[m] = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        for (auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator+(const Rat& c, const Poly& b) { return Poly(c) + b; }
    friend Poly operator+(const Poly& a, const Rat& c) { return a + Poly(c); }
    friend Poly operator-(const Rat& c, const Poly& b) { return Poly(c) - b; }
    friend Poly operator-(const Poly& a, const Rat& c) { return a - Poly(c); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Rat& c) {
        if (c.is_zero()) {
            t_.clear();
            return *this;
        }
        for (auto& [m, v] : t_) v *= c;
        return *this;
    }
    friend Poly operator*(Poly a, const Rat& c) { return a *= c; }
    friend Poly operator*(const Rat& c, Poly a) { return a *= c; }

    Poly pow(int e) const {
        if (e < 0) throw std::domain_error("Poly: negative power");
        Poly r(Rat(1)), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Derivation d/dt: Leibniz over products, symbols per their kind.
    Poly derive() const {
        Poly r;
        for (auto& [m, c] : t_) {
            for (size_t i = 0; i < m.factors.size(); ++i) {
                auto [s, e] = m.factors[i];
                Poly ds = derive_sym(s);
                if (ds.is_zero()) continue;
                Mono rest;
                for (size_t j = 0; j < m.factors.size(); ++j) {
                    int ee = m.factors[j].second - (j == i ? 1 : 0);
                    if (ee > 0) rest.factors.push_back({m.factors[j].first, ee});
                }
                r += Poly(rest, c * Rat(e)) * ds;
            }
        }
        return r;
    }

    Poly derive(int k) const {
        Poly r = *this;
        for (int i = 0; i < k; ++i) r = r.derive();
        return r;
    }

    /// Formal partial derivative with respect to one jet variable.
    Poly partial(const Sym& s) const {
        Poly r;
        for (auto& [m, c] : t_) {
            int e = m.exponent(s);
            if (e == 0) continue;
            Mono rest;
            for (auto& [x, ee] : m.factors) {
                int d = ee - (x == s ? 1 : 0);
                if (d > 0) rest.factors.push_back({x, d});
            }
            r.add_term(rest, c * Rat(e));
        }
        return r;
    }

    /// Simultaneous substitution sym -> polynomial. Symbols not mapped stay.
    Poly subst(const std::map<Sym, Poly>& images) const {
        Poly r;
        for (auto& [m, c] : t_) {
            Poly term(c);
            Mono untouched;
            for (auto& [s, e] : m.factors) {
                auto it = images.find(s);
                if (it == images.end())
                    untouched.factors.push_back({s, e});
                else
                    term *= it->second.pow(e);
            }
            r += term * Poly(untouched, Rat(1));
        }
        return r;
    }

    /// Ring homomorphism determined by images of order-0 Jet symbols,
    /// extended to higher jets by differentiating the images; commutes
    /// with derive().
    Poly substitute_params(const std::map<std::string, Poly>& action) const {
        std::map<Sym, Poly> images;
        for (auto& [m, c] : t_)
            for (auto& [s, e] : m.factors) {
                if (s.kind != SymKind::Jet) continue;
                auto it = action.find(s.name);
                if (it == action.end()) continue;
                if (!images.count(s)) images[s] = it->second.derive(s.order);
            }
        return subst(images);
    }

    /// gcd of the rational coefficients (nonnegative; 0 for the zero poly).
    Rat content() const {
        Rat g(0);
        for (auto& [m, c] : t_) g = rat_gcd(g, c);
        return g;
    }

    /// Coefficient of the first term in the canonical display order.
    Rat lead_coeff_display() const {
        if (t_.empty()) return Rat(0);
        return t_.begin()->second;
    }

    /// Division leading term: maximal monomial under the term order.
    std::pair<Mono, Rat> lead_div() const {
        if (t_.empty()) throw std::domain_error("Poly: leading term of zero");
        auto it = std::prev(t_.end());
        return {it->first, it->second};
    }

    /// View as univariate in `s`: exponent -> coefficient polynomial.
    std::map<int, Poly> collect(const Sym& s) const {
        std::map<int, Poly> r;
        for (auto& [m, c] : t_) {
            int e = m.exponent(s);
            Mono rest;
            for (auto& [x, ee] : m.factors)
                if (!(x == s)) rest.factors.push_back({x, ee});
            r[e].add_term(rest, c);
        }
        return r;
    }

    int degree_in(const Sym& s) const {
        int d = 0;
        for (auto& [m, c] : t_) d = std::max(d, m.exponent(s));
        return d;
    }

    std::string str() const;

private:
    static Poly derive_sym(const Sym& s) {
        switch (s.kind) {
            case SymKind::Jet: {
                return Poly(Sym{s.name, s.order + 1, SymKind::Jet});
            }
            case SymKind::Time:
                return Poly(Rat(1));
            case SymKind::Const:
            case SymKind::State:
                return Poly();
        }
        return Poly();
    }

    Terms t_;
};

inline std::string mono_str(const Mono& m) {
    std::string s;
    bool first = true;
    for (auto& [x, e] : m.factors) {
        if (!first) s += '*';
        first = false;
        s += x.str();
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

inline std::string Poly::str() const {
    if (t_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [m, c] : t_) {
        Rat a = c.abs();
        bool neg = c.is_negative();
        if (first) {
            if (neg) s += '-';
        } else {
            s += neg ? '-' : '+';
        }
        first = false;
        if (m.is_one()) {
            s += a.str();
        } else {
            if (!a.is_one()) s += a.str() + "*";
            s += mono_str(m);
        }
    }
    return s;
}

/// Exact division; throws if `b` does not divide `a`.
inline Poly divexact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("divexact: zero divisor");
    Poly r = a, q;
    auto [mb, cb] = b.lead_div();
    while (!r.is_zero()) {
        auto [mr, cr] = r.lead_div();
        if (!mr.divisible_by(mb)) throw std::domain_error("divexact: not divisible");
        Poly term(mr.divide(mb), cr / cb);
        q += term;
        r -= term * b;
    }
    return q;
}

namespace detail {

/// Pseudo-remainder of a by b, both viewed as univariate in x.
inline Poly prem(const Poly& a, const Poly& b, const Sym& x) {
    int db = b.degree_in(x);
    auto bc = b.collect(x);
    Poly lb = bc[db];
    Poly r = a;
    int dr = r.degree_in(x);
    while (!r.is_zero() && dr >= db) {
        auto rc = r.collect(x);
        Poly lr = rc[dr];
        r = lb * r - lr * Poly(Mono::var(x, dr - db), Rat(1)) * b;
        int nd = r.degree_in(x);
        if (!r.is_zero() && nd >= dr)
            throw std::logic_error("prem: degree did not drop");
        dr = nd;
    }
    return r;
}

}  // namespace detail

/// Content-normalized sign-canonical copy: coefficients made integral and
/// coprime, first display term positive. Zero maps to zero.
inline Poly normalize_condition(const Poly& p) {
    if (p.is_zero()) return p;
    Rat c = p.content();
    if (p.lead_coeff_display().is_negative()) c = -c;
    Poly r = p;
    r *= Rat(1) / c;
    return r;
}

/// Common monomial factor of all terms (zero poly maps to 1).
inline Mono mono_content(const Poly& p) {
    if (p.is_zero()) return Mono::one();
    auto it = p.terms().begin();
    Mono m = it->first;
    for (++it; it != p.terms().end() && !m.is_one(); ++it) {
        Mono r;
        for (auto& [s, e] : m.factors) {
            int o = it->first.exponent(s);
            if (o > 0) r.factors.push_back({s, std::min(e, o)});
        }
        m = r;
    }
    return m;
}

inline Mono mono_gcd(const Mono& a, const Mono& b) {
    Mono r;
    for (auto& [s, e] : a.factors) {
        int o = b.exponent(s);
        if (o > 0) r.factors.push_back({s, std::min(e, o)});
    }
    return r;
}

/// Primitive multivariate gcd (content included, recursively), canonical sign.
/// Monomial content is split off first (it carries all single-variable
/// factors); the rest goes through a primitive PRS. Adequate for the small
/// expressions that occur here.
inline Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return normalize_condition(b);
    if (b.is_zero()) return normalize_condition(a);
    if (a.is_constant() || b.is_constant()) return Poly(Rat(1));

    Mono ma = mono_content(a), mb = mono_content(b);
    Mono common = mono_gcd(ma, mb);
    Poly pa = ma.is_one() ? a : divexact(a, Poly(ma, Rat(1)));
    Poly pb = mb.is_one() ? b : divexact(b, Poly(mb, Rat(1)));
    Poly lead(common, Rat(1));

    if (pa.is_constant() || pb.is_constant()) return normalize_condition(lead);

    // disjoint supports cannot share a non-monomial factor
    {
        auto sa = pa.symbols(), sb = pb.symbols();
        bool disjoint = true;
        for (auto& s : sa)
            if (sb.count(s)) {
                disjoint = false;
                break;
            }
        if (disjoint) return normalize_condition(lead);
    }

    // main variable: greatest symbol occurring in either
    Sym x = *pa.symbols().rbegin();
    {
        auto sb = pb.symbols();
        if (!sb.empty() && x < *sb.rbegin()) x = *sb.rbegin();
    }

    auto content_in = [&](const Poly& p) {
        Poly c;
        for (auto& [e, q] : p.collect(x)) {
            c = poly_gcd(c, q);
            if (c.is_constant() && !c.is_zero()) break;
        }
        return c;
    };

    if (pa.degree_in(x) == 0) return normalize_condition(lead * poly_gcd(pa, content_in(pb)));
    if (pb.degree_in(x) == 0) return normalize_condition(lead * poly_gcd(content_in(pa), pb));

    Poly ca = content_in(pa), cb = content_in(pb);
    pa = divexact(pa, ca);
    pb = divexact(pb, cb);
    Poly c = poly_gcd(ca, cb) * lead;

    if (pa.degree_in(x) < pb.degree_in(x)) std::swap(pa, pb);
    while (true) {
        Poly r = detail::prem(pa, pb, x);
        if (r.is_zero()) break;
        if (r.degree_in(x) == 0) return normalize_condition(c);
        pa = pb;
        pb = divexact(r, content_in(r));
        pb = normalize_condition(pb);
    }
    return normalize_condition(c * divexact(pb, content_in(pb)));
}

}  // namespace pql
