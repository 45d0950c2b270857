#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "pql/polynomial.hpp"

namespace pql {

struct ZeroDenominator : std::domain_error {
    ZeroDenominator() : std::domain_error("zero denominator") {}
};

/// Fraction of differential polynomials, kept coprime with the denominator
/// primitive (integer coefficients, gcd 1) and positive leading coefficient
/// under the canonical term order. Equality is structural.
class Frac {
public:
    Frac() : num_(), den_(Rat(1)) {}
    Frac(Poly n) : num_(std::move(n)), den_(Rat(1)) {}
    Frac(Rat c) : num_(Poly(std::move(c))), den_(Rat(1)) {}
    Frac(long long c) : num_(Poly(Rat(c))), den_(Rat(1)) {}
    explicit Frac(const Sym& s) : num_(Poly(s)), den_(Rat(1)) {}
    Frac(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_ == Poly(Rat(1)); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rat constant_value() const { return num_.constant_value() / den_.constant_value(); }

    Frac operator-() const {
        Frac r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend Frac operator+(const Frac& a, const Frac& b) {
        return Frac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Frac operator-(const Frac& a, const Frac& b) { return a + (-b); }
    friend Frac operator*(const Frac& a, const Frac& b) {
        return Frac(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Frac operator/(const Frac& a, const Frac& b) {
        if (b.is_zero()) throw ZeroDenominator();
        return Frac(a.num_ * b.den_, a.den_ * b.num_);
    }
    Frac& operator+=(const Frac& o) { return *this = *this + o; }
    Frac& operator-=(const Frac& o) { return *this = *this - o; }
    Frac& operator*=(const Frac& o) { return *this = *this * o; }
    Frac& operator/=(const Frac& o) { return *this = *this / o; }

    friend bool operator==(const Frac& a, const Frac& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }

    Frac pow(int e) const {
        if (e < 0) return (Frac(Rat(1)) / *this).pow(-e);
        Frac r(Rat(1)), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    /// d/dt by the quotient rule.
    Frac derive() const {
        return Frac(num_.derive() * den_ - num_ * den_.derive(), den_ * den_);
    }

    Frac partial(const Sym& s) const {
        return Frac(num_.partial(s) * den_ - num_ * den_.partial(s), den_ * den_);
    }

    Frac substitute_params(const std::map<std::string, Poly>& action) const {
        return Frac(num_.substitute_params(action), den_.substitute_params(action));
    }

    bool contains(const Sym& s) const { return num_.contains(s) || den_.contains(s); }

    std::set<Sym> symbols() const {
        auto r = num_.symbols();
        auto d = den_.symbols();
        r.insert(d.begin(), d.end());
        return r;
    }

    std::string str() const {
        if (is_polynomial()) return num_.str();
        std::string n = num_.str(), d = den_.str();
        if (num_.terms().size() > 1) n = "(" + n + ")";
        if (den_.terms().size() > 1) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    void normalize() {
        if (den_.is_zero()) throw ZeroDenominator();
        if (num_.is_zero()) {
            den_ = Poly(Rat(1));
            return;
        }
        if (!den_.is_constant()) {
            Poly g = poly_gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = divexact(num_, g);
                den_ = divexact(den_, g);
            }
        }
        Rat c = den_.content();
        if (den_.lead_coeff_display().is_negative()) c = -c;
        Rat inv = Rat(1) / c;
        num_ *= inv;
        den_ *= inv;
    }

    Poly num_, den_;
};

/// Substitute symbols by fractions in a polynomial (simultaneously).
inline Frac subst_frac(const Poly& p, const std::map<Sym, Frac>& images) {
    Frac r;
    for (auto& [m, c] : p.terms()) {
        Frac term{Rat(c)};
        Mono untouched;
        for (auto& [s, e] : m.factors) {
            auto it = images.find(s);
            if (it == images.end())
                untouched.factors.push_back({s, e});
            else
                term *= it->second.pow(e);
        }
        r += term * Frac(Poly(untouched, Rat(1)));
    }
    return r;
}

inline Frac subst_frac(const Frac& f, const std::map<Sym, Frac>& images) {
    return subst_frac(f.num(), images) / subst_frac(f.den(), images);
}

}  // namespace pql
