#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pql/quadext.hpp"
#include "pql/upoly.hpp"

namespace pql {

/// Univariate rational function over Q in a named variable, kept coprime
/// with an integer-primitive, positively-led denominator.
struct RatFun1 {
    std::string var = "s";
    UPolyQ num, den{std::vector<Rat>{Rat(1)}};

    RatFun1() = default;
    RatFun1(std::string v, UPolyQ n, UPolyQ d) : var(std::move(v)), num(std::move(n)), den(std::move(d)) {
        normalize();
    }

    bool is_zero() const { return num.is_zero(); }

    void normalize() {
        if (den.is_zero()) throw std::domain_error("RatFun1: zero denominator");
        if (num.is_zero()) {
            den = UPolyQ(Rat(1));
            return;
        }
        UPolyQ g = upoly_gcd(num, den);
        if (g.degree() > 0) {
            num = num.divrem(g).first;
            den = den.divrem(g).first;
        }
        // integer-primitive positive-leading denominator
        Rat c(0);
        for (auto& v : den.coeffs()) c = rat_gcd(c, v);
        if (den.lead().is_negative()) c = -c;
        Rat inv = Rat(1) / c;
        num = num * inv;
        den = den * inv;
    }

    friend RatFun1 operator+(const RatFun1& f, const RatFun1& g) {
        return RatFun1(f.var, f.num * g.den + g.num * f.den, f.den * g.den);
    }
    friend RatFun1 operator-(const RatFun1& f, const RatFun1& g) {
        return RatFun1(f.var, f.num * g.den - g.num * f.den, f.den * g.den);
    }
    friend RatFun1 operator*(const RatFun1& f, const RatFun1& g) {
        return RatFun1(f.var, f.num * g.num, f.den * g.den);
    }
    friend RatFun1 operator/(const RatFun1& f, const RatFun1& g) {
        return RatFun1(f.var, f.num * g.den, f.den * g.num);
    }
    friend bool operator==(const RatFun1& f, const RatFun1& g) {
        return f.num == g.num && f.den == g.den;
    }

    template <class V>
    V eval(const V& x) const {
        return num.eval(x) / den.eval(x);
    }

    /// Residue at a simple rational pole x0 of the reduced fraction.
    Rat residue_at(const Rat& x0) const {
        Rat d = den.derivative().eval(x0);
        if (d.is_zero()) throw std::domain_error("RatFun1: pole not simple");
        return num.eval(x0) / d;
    }

    QuadExt residue_at(const QuadExt& x0) const {
        QuadExt d = den.eval(x0);
        QuadExt dd = den.derivative().eval(x0);
        if (!d.is_zero()) throw std::domain_error("RatFun1: not a pole");
        if (dd.is_zero()) throw std::domain_error("RatFun1: pole not simple");
        return num.eval(x0) / dd;
    }

    /// The function satisfied by the reciprocal dependent variable: if
    /// -s''/(s')^2 = F(s), then sigma = 1/s satisfies -sigma''/(sigma')^2 =
    /// G(sigma) with G(w) = -(F(1/w) + 2w)/w^2.
    RatFun1 reciprocal_transform() const {
        int m = std::max(num.degree(), den.degree());
        UPolyQ rn = num.reverse(m), rd = den.reverse(m);
        // F(1/w) = rn/rd
        UPolyQ w = UPolyQ::x();
        UPolyQ n2 = rn + (w * Rat(2)) * rd;     // F(1/w) + 2w
        return RatFun1(var, -n2, (w * w) * rd); // -(...)/w^2
    }

    std::string str() const {
        auto ps = [&](const UPolyQ& p) {
            if (p.is_zero()) return std::string("0");
            std::string s;
            for (int i = p.degree(); i >= 0; --i) {
                Rat c = p.coeff(i);
                if (c.is_zero()) continue;
                if (!s.empty()) s += c.is_negative() ? "-" : "+";
                else if (c.is_negative()) s += "-";
                Rat a = c.abs();
                if (i == 0 || !a.is_one()) s += a.str();
                if (i > 0) {
                    if (!a.is_one()) s += "*";
                    s += var;
                    if (i > 1) s += "^" + std::to_string(i);
                }
            }
            return s;
        };
        if (den == UPolyQ(Rat(1))) return ps(num);
        return "(" + ps(num) + ")/(" + ps(den) + ")";
    }
};

/// Factor of the denominator relevant to pole analysis.
struct PoleInfo {
    // exactly one of the three is populated
    std::optional<Rat> rational;
    std::optional<QuadExt> quadratic;   // one of a conjugate pair
    std::optional<UPolyQ> irreducible;  // cubic (or higher) irreducible factor
    int multiplicity = 1;
};

/// Poles of the reduced fraction, split by the field needed to express them.
inline std::vector<PoleInfo> poles(const RatFun1& f) {
    std::vector<PoleInfo> out;
    if (f.den.degree() <= 0) return out;
    UPolyQ rem = f.den;
    for (auto& [r, m] : rational_roots(f.den)) {
        out.push_back({r, std::nullopt, std::nullopt, m});
        for (int i = 0; i < m; ++i) rem = rem.divrem(UPolyQ(std::vector<Rat>{-r, Rat(1)})).first;
    }
    if (rem.degree() == 2) {
        Rat p = rem.coeff(1) / rem.coeff(2), q = rem.coeff(0) / rem.coeff(2);
        Rat disc = p * p - Rat(4) * q;
        QuadExt root{-p / Rat(2), Rat(1, 2), disc};
        out.push_back({std::nullopt, root, std::nullopt, 1});
    } else if (rem.degree() > 2) {
        out.push_back({std::nullopt, std::nullopt, rem, 1});
    }
    return out;
}

}  // namespace pql
