#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pql {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
    using boost::multiprecision::gcd;
    BigInt g = gcd(a, b);
    return g < 0 ? BigInt(-g) : g;
}

inline BigInt big_lcm(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    BigInt g = big_gcd(a, b);
    BigInt l = (a / g) * b;
    return l < 0 ? BigInt(-l) : l;
}

/// Exact rational number with canonical representation:
/// gcd(|num|, den) = 1 and den >= 1.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(const BigInt& n) : num_(n), den_(1) {}
    Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }
    Rat(long long n, long long d) : num_(n), den_(d) { reduce(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rat& operator+=(const Rat& o) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        reduce();
        return *this;
    }
    Rat& operator-=(const Rat& o) { return *this += -o; }
    Rat& operator*=(const Rat& o) {
        num_ *= o.num_;
        den_ *= o.den_;
        reduce();
        return *this;
    }
    Rat& operator/=(const Rat& o) {
        if (o.num_ == 0) throw std::domain_error("Rat: division by zero");
        num_ *= o.den_;
        den_ *= o.num_;
        reduce();
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    Rat abs() const { return num_ < 0 ? -*this : *this; }

    Rat pow(int e) const {
        if (e < 0) return (Rat(1) / *this).pow(-e);
        Rat r(1), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    /// Integer square root test; returns true and sets r if *this = r^2 with r >= 0.
    bool sqrt_exact(Rat& r) const {
        if (num_ < 0) return false;
        using boost::multiprecision::sqrt;
        BigInt sn = sqrt(num_), sd = sqrt(den_);
        if (sn * sn != num_ || sd * sd != den_) return false;
        r = Rat(sn, sd);
        return true;
    }

    double to_double() const { return num_.convert_to<double>() / den_.convert_to<double>(); }
    long double to_long_double() const {
        return num_.convert_to<long double>() / den_.convert_to<long double>();
    }

    /// Requires den == 1 and value within long long range.
    long long to_int() const {
        if (den_ != 1) throw std::domain_error("Rat: not an integer");
        return num_.convert_to<long long>();
    }

    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

private:
    void reduce() {
        if (den_ == 0) throw std::domain_error("Rat: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = big_gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_, den_;
};

/// gcd of rationals: gcd(p/q, r/s) = gcd(p,r)/lcm(q,s), nonnegative.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a.is_zero()) return b.abs();
    if (b.is_zero()) return a.abs();
    return Rat(big_gcd(a.num(), b.num()), big_lcm(a.den(), b.den()));
}

/// Gaussian rational: re + im*i, componentwise canonical.
struct GaussRat {
    Rat re, im;

    GaussRat() = default;
    GaussRat(Rat r) : re(std::move(r)), im(0) {}
    GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    GaussRat(long long r) : re(r), im(0) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    GaussRat operator-() const { return {-re, -im}; }
    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
        Rat n = b.re * b.re + b.im * b.im;
        if (n.is_zero()) throw std::domain_error("GaussRat: division by zero");
        GaussRat c = a * GaussRat{b.re, -b.im};
        return {c.re / n, c.im / n};
    }
    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    template <class R>
    std::complex<R> to_complex() const {
        return {static_cast<R>(re.to_long_double()), static_cast<R>(im.to_long_double())};
    }

    std::string str() const {
        if (im.is_zero()) return re.str();
        std::string s;
        if (!re.is_zero()) s = re.str() + (im.is_negative() ? "" : "+");
        s += im.str() + "*i";
        return s;
    }
};

}  // namespace pql
