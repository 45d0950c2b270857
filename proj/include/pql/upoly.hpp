#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pql/polynomial.hpp"
#include "pql/rational.hpp"

namespace pql {

/// Dense univariate polynomial over a field; coefficient of x^k at index k.
template <class K>
class UPoly {
public:
    UPoly() = default;
    UPoly(std::vector<K> c) : c_(std::move(c)) { trim(); }
    explicit UPoly(K c) : c_{std::move(c)} { trim(); }

    static UPoly x() { return UPoly(std::vector<K>{K(0), K(1)}); }

    const std::vector<K>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    K coeff(int k) const { return k >= 0 && k < (int)c_.size() ? c_[k] : K(0); }
    const K& lead() const { return c_.back(); }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
        return UPoly(std::move(r));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] - b.c_[i];
        return UPoly(std::move(r));
    }
    UPoly operator-() const {
        std::vector<K> r = c_;
        for (auto& v : r) v = K(0) - v;
        return UPoly(std::move(r));
    }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return UPoly(std::move(r));
    }
    friend UPoly operator*(const UPoly& a, const K& s) {
        std::vector<K> r = a.c_;
        for (auto& v : r) v = v * s;
        return UPoly(std::move(r));
    }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    UPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<K> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * K(static_cast<long long>(i));
        return UPoly(std::move(r));
    }

    template <class V>
    V eval(const V& x) const {
        V r{};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + V(*it);
        return r;
    }

    /// Euclidean division (field coefficients): returns {quotient, remainder}.
    std::pair<UPoly, UPoly> divrem(const UPoly& d) const {
        if (d.is_zero()) throw std::domain_error("UPoly: division by zero");
        UPoly r = *this, q;
        q.c_.assign(std::max<int>(0, degree() - d.degree() + 1), K(0));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            K f = r.lead() / d.lead();
            int s = r.degree() - d.degree();
            q.c_[s] = q.c_[s] + f;
            for (int i = 0; i <= d.degree(); ++i) r.c_[i + s] = r.c_[i + s] - f * d.c_[i];
            r.trim();
        }
        q.trim();
        return {q, r};
    }

    /// x^n * p(1/x) for n = max(deg, m); pads so rational reciprocal
    /// substitution works uniformly.
    UPoly reverse(int m) const {
        int n = std::max(degree(), m);
        std::vector<K> r(n + 1, K(0));
        for (int i = 0; i <= degree(); ++i) r[n - i] = c_[i];
        return UPoly(std::move(r));
    }

    /// Shift x -> x + a.
    UPoly shift(const K& a) const {
        UPoly r;
        UPoly lin(std::vector<K>{a, K(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + UPoly(*it);
        return r;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == K(0)) c_.pop_back();
    }
    std::vector<K> c_;
};

using UPolyQ = UPoly<Rat>;

inline UPolyQ upoly_gcd(UPolyQ a, UPolyQ b) {
    while (!b.is_zero()) {
        auto [q, r] = a.divrem(b);
        a = b;
        b = r;
    }
    if (!a.is_zero()) a = a * (Rat(1) / a.lead());
    return a;
}

inline void add_root(std::vector<std::pair<Rat, int>>& roots, const Rat& r) {
    for (auto& [x, m] : roots)
        if (x == r) {
            ++m;
            return;
        }
    roots.push_back({r, 1});
}

/// All rational roots with multiplicities (rational root theorem).
inline std::vector<std::pair<Rat, int>> rational_roots(const UPolyQ& p) {
    std::vector<std::pair<Rat, int>> roots;
    if (p.degree() <= 0) return roots;
    UPolyQ cur = p;
    // clear denominators -> integer coefficients
    auto integerize = [](const UPolyQ& q) {
        BigInt l = 1;
        for (auto& c : q.coeffs()) l = big_lcm(l, c.den());
        std::vector<BigInt> v;
        for (auto& c : q.coeffs()) v.push_back(c.num() * (l / c.den()));
        return v;
    };
    auto divisors = [](BigInt n) {
        if (n < 0) n = -n;
        std::vector<BigInt> d;
        for (BigInt i = 1; i * i <= n; ++i) {
            if (n % i == 0) {
                d.push_back(i);
                if (i * i != n) d.push_back(n / i);
            }
            if (i > 2000000) break;  // out of scope for the sizes that occur here
        }
        return d;
    };
    bool progress = true;
    while (progress && cur.degree() >= 1) {
        progress = false;
        // strip zero roots
        if (cur.coeff(0).is_zero()) {
            std::vector<Rat> shifted(cur.coeffs().begin() + 1, cur.coeffs().end());
            cur = UPolyQ(shifted);
            add_root(roots, Rat(0));
            progress = true;
            continue;
        }
        auto v = integerize(cur);
        for (auto& pn : divisors(v.front()))
            for (auto& qn : divisors(v.back()))
                for (int sgn : {1, -1}) {
                    Rat cand(pn * sgn, qn);
                    if (!cur.eval(cand).is_zero()) continue;
                    auto [q, r] = cur.divrem(UPolyQ(std::vector<Rat>{-cand, Rat(1)}));
                    cur = q;
                    add_root(roots, cand);
                    progress = true;
                    goto next_round;
                }
    next_round:;
    }
    return roots;
}

/// Convert a Poly that is univariate in `x` (all other symbols must be
/// absent) into a dense UPolyQ.
inline UPolyQ to_upoly(const Poly& p, const Sym& x) {
    std::vector<Rat> c(p.degree_in(x) + 1, Rat(0));
    for (auto& [m, v] : p.terms()) {
        int e = m.exponent(x);
        if (m.degree() != e) throw std::domain_error("to_upoly: extra symbols present");
        c[e] = v;
    }
    return UPolyQ(c);
}

inline Poly from_upoly(const UPolyQ& p, const Sym& x) {
    Poly r;
    for (int i = 0; i <= p.degree(); ++i) r.add_term(Mono::var(x, i), p.coeff(i));
    return r;
}

/// Resultant Res_x(a, b) of two polynomials in the symbol x whose
/// coefficients may contain other symbols; computed from the Sylvester
/// matrix by cofactor expansion (sizes here are tiny).
inline Poly resultant(const Poly& a, const Poly& b, const Sym& x) {
    int m = a.degree_in(x), n = b.degree_in(x);
    if (m < 0 || a.is_zero() || b.is_zero()) return Poly();
    auto ac = a.collect(x), bc = b.collect(x);
    auto get = [](std::map<int, Poly>& c, int i) { return c.count(i) ? c[i] : Poly(); };
    int N = m + n;
    std::vector<std::vector<Poly>> M(N, std::vector<Poly>(N));
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) M[r][r + (m - i)] = get(ac, i);
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i) M[n + r][r + (n - i)] = get(bc, i);

    // cofactor determinant
    std::vector<int> cols(N);
    for (int i = 0; i < N; ++i) cols[i] = i;
    struct Det {
        std::vector<std::vector<Poly>>& M;
        Poly run(std::vector<int> cols, int row) {
            if (cols.empty()) return Poly(Rat(1));
            Poly acc;
            for (size_t k = 0; k < cols.size(); ++k) {
                const Poly& piv = M[row][cols[k]];
                if (piv.is_zero()) continue;
                std::vector<int> rest;
                for (size_t j = 0; j < cols.size(); ++j)
                    if (j != k) rest.push_back(cols[j]);
                Poly sub = run(rest, row + 1);
                Poly term = piv * sub;
                if (k % 2) term = -term;
                acc += term;
            }
            return acc;
        }
    } det{M};
    return det.run(cols, 0);
}

}  // namespace pql
