#pragma once

#include <stdexcept>
#include <string>

#include "pql/rational.hpp"

namespace pql {

/// Element a + b*sqrt(d) of a quadratic extension of Q. All values combined
/// in one computation must share the same radicand d (d = 0 encodes a plain
/// rational). d may be negative (imaginary extension); it is required to not
/// be a perfect square when b != 0.
struct QuadExt {
    Rat a, b, d;

    QuadExt() : a(0), b(0), d(0) {}
    QuadExt(Rat r) : a(std::move(r)), b(0), d(0) {}
    QuadExt(Rat a_, Rat b_, Rat d_) : a(std::move(a_)), b(std::move(b_)), d(std::move(d_)) {
        if (b.is_zero()) d = Rat(0);
    }
    QuadExt(long long v) : a(v), b(0), d(0) {}

    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    bool is_rational() const { return b.is_zero(); }

    static Rat join(const Rat& d1, const Rat& d2) {
        if (d1.is_zero()) return d2;
        if (d2.is_zero()) return d1;
        if (d1 != d2) throw std::domain_error("QuadExt: mixed radicands");
        return d1;
    }

    QuadExt conj() const { return {a, -b, d}; }
    Rat norm() const { return a * a - b * b * d; }

    QuadExt operator-() const { return {-a, -b, d}; }
    friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
        return {x.a + y.a, x.b + y.b, join(x.d, y.d)};
    }
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y) { return x + (-y); }
    friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
        Rat d = join(x.d, y.d);
        return {x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d};
    }
    friend QuadExt operator/(const QuadExt& x, const QuadExt& y) {
        if (y.is_zero()) throw std::domain_error("QuadExt: division by zero");
        Rat n = y.norm();
        QuadExt z = x * y.conj();
        return {z.a / n, z.b / n, z.d};
    }
    friend bool operator==(const QuadExt& x, const QuadExt& y) {
        return x.a == y.a && x.b == y.b && (x.b.is_zero() || x.d == y.d);
    }
    friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

    std::string str() const {
        if (b.is_zero()) return a.str();
        std::string s;
        if (!a.is_zero()) s = a.str() + (b.is_negative() ? "" : "+");
        if (b == Rat(-1))
            s += "-";
        else if (b != Rat(1))
            s += b.str() + "*";
        s += "sqrt(" + d.str() + ")";
        return s;
    }
};

}  // namespace pql
