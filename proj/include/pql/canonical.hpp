#pragma once

#include <map>
#include <string>

#include "pql/chart.hpp"
#include "pql/rewrite.hpp"
#include "pql/system.hpp"

namespace pql {

struct NotCanonical : std::domain_error {
    explicit NotCanonical(const std::string& why) : std::domain_error("NotCanonical: " + why) {}
};
struct ZeroA : std::domain_error {
    ZeroA() : std::domain_error("canonical coefficient a vanishes identically") {}
};
struct NonZeroB : std::domain_error {
    NonZeroB() : std::domain_error("elementary chain requires b = 0") {}
};

/// Normal form near a singular point:
///   y x' = n a(t) x + b(t) y + sum_{i+j>=2} f_ij x^i y^j
///   y'   = a(t) + sum_{i+j>=1} g_ij x^i y^j
/// with n >= 1 and a not identically zero.
struct CanonicalEquation {
    int n = 1;
    Frac a, b;
    std::map<std::pair<int, int>, Frac> f;  // i + j >= 2
    std::map<std::pair<int, int>, Frac> g;  // i + j >= 1
    std::array<std::string, 2> vars{"x", "y"};  // (x, y) roles

    /// Reassemble as a System for re-extraction checks.
    System to_system() const {
        System s;
        s.vars = vars;
        Sym x = state(vars[0]), y = state(vars[1]);
        Frac xp = Frac(Rat(n)) * a * Frac(Poly(x)) + b * Frac(Poly(y));
        for (auto& [ij, c] : f)
            xp += c * Frac(Poly(Mono::var(x, ij.first) * Mono::var(y, ij.second), Rat(1)));
        Frac yp = a;
        for (auto& [ij, c] : g)
            yp += c * Frac(Poly(Mono::var(x, ij.first) * Mono::var(y, ij.second), Rat(1)));
        s.rhs[0] = xp / Frac(Poly(y));
        s.rhs[1] = yp;
        return s;
    }
};

namespace detail {

/// Try to read the canonical data taking `tv` as the transversal variable
/// index; returns nullopt if the shape does not fit that role assignment.
inline std::optional<CanonicalEquation> try_extract(const System& s, int tv,
                                                    std::string* why = nullptr) {
    auto fail = [&](const std::string& m) {
        if (why && why->empty()) *why = m;
        return std::nullopt;
    };
    int xv = 1 - tv;
    Sym y = state(s.vars[tv]), x = state(s.vars[xv]);

    // transversal equation must be polynomial in the state
    const Frac& fy = s.rhs[tv];
    if (fy.den().contains(y) || fy.den().contains(x))
        return fail("transversal rhs has a state-dependent denominator");

    // x' must have exactly one factor of y in its denominator
    const Frac& fx = s.rhs[xv];
    if (fx.den().contains(x)) return fail("x' denominator contains x");
    int dy = fx.den().degree_in(y);
    if (dy != 1) return fail("x' denominator not a simple pole along the transversal line");
    auto parts = fx.den().collect(y);
    if (parts.count(0) && !parts[0].is_zero()) return fail("x' denominator not divisible by y");
    Poly den_coeff = parts[1];  // state-free cofactor
    if (den_coeff.contains(x) || den_coeff.contains(y))
        return fail("x' denominator cofactor not state-free");

    // y x' = p with p polynomial in (x, y)
    Frac p = Frac(fx.num(), den_coeff);

    CanonicalEquation ce;
    ce.vars = {s.vars[xv], s.vars[tv]};

    // split both polynomials by state monomials
    auto split = [&](const Frac& f) {
        std::map<std::pair<int, int>, Frac> out;
        for (auto& [m, c] : f.num().terms()) {
            int i = m.exponent(x), j = m.exponent(y);
            Mono rest;
            for (auto& [sx, e] : m.factors)
                if (!(sx == x) && !(sx == y)) rest.factors.push_back({sx, e});
            Frac cur(Poly(rest, c), f.den());
            auto it = out.find({i, j});
            if (it == out.end())
                out[{i, j}] = cur;
            else
                it->second += cur;
        }
        return out;
    };

    auto gy = split(fy);
    ce.a = gy.count({0, 0}) ? gy[{0, 0}] : Frac();
    if (ce.a.is_zero()) return fail("transversal constant term vanishes");
    for (auto& [ij, c] : gy) {
        if (ij == std::pair{0, 0}) continue;
        if (c.is_zero()) continue;
        ce.g[ij] = c;
    }

    auto px = split(p);
    if (px.count({0, 0}) && !px[{0, 0}].is_zero())
        return fail("x-equation has a constant term at the point");
    Frac na = px.count({1, 0}) ? px[{1, 0}] : Frac();
    Frac ratio = na / ce.a;
    if (!ratio.is_constant()) return fail("x-linear coefficient not an integer multiple of a");
    Rat nv = ratio.constant_value();
    if (!nv.is_integer() || nv < Rat(1)) return fail("index not a positive integer");
    ce.n = static_cast<int>(nv.to_int());
    ce.b = px.count({0, 1}) ? px[{0, 1}] : Frac();
    for (auto& [ij, c] : px) {
        if (ij.first + ij.second <= 1) continue;
        if (c.is_zero()) continue;
        ce.f[ij] = c;
    }
    return ce;
}

}  // namespace detail

/// Translate the point to the origin and read the canonical data. The
/// transversal variable is the one whose derivative has a nonzero constant
/// term; if both roles fit, the one with the smaller index wins.
inline CanonicalEquation extract_canonical(const System& s, std::array<Frac, 2> at) {
    System tr = s;
    std::map<Sym, Frac> shift;
    bool any = false;
    for (int i = 0; i < 2; ++i)
        if (!at[i].is_zero()) {
            shift[state(s.vars[i])] = Frac(Poly(state(s.vars[i]))) + at[i];
            any = true;
        }
    if (any)
        for (int i = 0; i < 2; ++i) tr.rhs[i] = subst_frac(tr.rhs[i], shift);

    std::string why;
    auto c0 = detail::try_extract(tr, 0, &why);
    auto c1 = detail::try_extract(tr, 1, &why);
    if (c0 && c1) return c0->n <= c1->n ? *c0 : *c1;
    if (c0) return *c0;
    if (c1) return *c1;
    throw NotCanonical(why.empty() ? "no admissible role assignment" : why);
}

/// One blow-up step x = (z - u) y with u = b/((n-1) a): the index drops by
/// exactly one and the canonical shape is preserved.
inline CanonicalEquation reduce_index(const CanonicalEquation& ce, const RuleSet& rules = {}) {
    if (ce.n < 2) throw std::domain_error("reduce_index: index already 1");
    if (ce.a.is_zero()) throw ZeroA();

    Frac u = rules.reduce(ce.b / (Frac(Rat(ce.n - 1)) * ce.a));
    Sym z = state(ce.vars[0]), y = state(ce.vars[1]);
    Frac zf{Poly(z)}, yf{Poly(y)};
    Frac zu = zf - u;

    // h = u' + sum f_ij (z-u)^i y^{i+j-2} - sum g_ij (z-u)^{i+1} y^{i+j-1}
    Frac h = rules.reduce(u.derive());
    for (auto& [ij, c] : ce.f)
        h += c * zu.pow(ij.first) * yf.pow(ij.first + ij.second - 2);
    for (auto& [ij, c] : ce.g)
        h -= c * zu.pow(ij.first + 1) * yf.pow(ij.first + ij.second - 1);

    // new x-equation: y z' = (n-1) a z + y h
    Frac xp = Frac(Rat(ce.n - 1)) * ce.a * zf + yf * h;
    // new y-equation: y' = a + sum g_ij (z-u)^i y^{i+j}
    Frac yp = ce.a;
    for (auto& [ij, c] : ce.g) yp += c * zu.pow(ij.first) * yf.pow(ij.first + ij.second);

    System sys;
    sys.vars = {ce.vars[0], ce.vars[1]};
    sys.rhs[0] = rules.reduce(xp) / yf;
    sys.rhs[1] = rules.reduce(yp);
    CanonicalEquation out = extract_canonical(sys, {Frac(), Frac()});
    if (out.n != ce.n - 1)
        throw std::logic_error("reduce_index: index did not drop by one");
    return out;
}

/// Iterate blow-ups down to index 1 and return the numerator of the final
/// b-coefficient, content-normalized with positive leading sign: the
/// necessary condition for freedom from movable critical points.
inline Poly necessary_condition(CanonicalEquation ce, const RuleSet& rules = {}) {
    if (ce.a.is_zero()) throw ZeroA();
    while (ce.n > 1) ce = reduce_index(ce, rules);
    Frac b = rules.reduce(ce.b);
    return normalize_condition(b.num());
}

/// Composition of n elementary transformations z = s u^n applied to the
/// chart system {u' = -1 + (b-a) u^2, u z' = -n z + b u - (n+1) u z^2}
/// with b = 0: the result has polynomial right-hand sides.
inline System elementary_chain(const Frac& a, const Frac& b, int n) {
    if (!b.is_zero()) throw NonZeroB();
    if (n < 1) throw std::domain_error("elementary_chain: n must be >= 1");
    Sym u = state("u"), z = state("z"), sv = state("s");
    System sys;
    sys.vars = {"u", "z"};
    Frac uf{Poly(u)}, zf{Poly(z)};
    sys.rhs[0] = Frac(Rat(-1)) - a * uf * uf;
    sys.rhs[1] = (Frac(Rat(-n)) * zf - Frac(Rat(n + 1)) * uf * zf * zf) / uf;

    Frac sf{Poly(sv)};
    RationalChart chain({"u", "z"}, {"u", "s"},
                        {Frac(Poly(u)), sf * Frac(Poly(Mono::var(u, n), Rat(1)))},
                        {Frac(Poly(u)), zf / Frac(Poly(Mono::var(u, n), Rat(1)))},
                        "z = s*u^" + std::to_string(n));
    System out = apply_chart(sys, chain);
    if (!out.is_polynomial())
        throw std::logic_error("elementary_chain: transformed system still has poles");
    return out;
}

}  // namespace pql
