#pragma once

#include <array>
#include <map>
#include <string>

#include "pql/system.hpp"

namespace pql {

struct SingularChart : std::domain_error {
    SingularChart() : std::domain_error("chart Jacobian is identically singular") {}
};
struct ZeroScale : std::domain_error {
    ZeroScale() : std::domain_error("gauge scale factor vanishes") {}
};

/// Birational change of state variables. `forward` expresses the old
/// variables in terms of the new ones; `inverse` the other way around.
/// forward o inverse = id is checked at construction.
struct RationalChart {
    std::array<std::string, 2> from_vars, to_vars;
    std::array<Frac, 2> forward;
    std::array<Frac, 2> inverse;
    std::string name;

    RationalChart(std::array<std::string, 2> from, std::array<std::string, 2> to,
                  std::array<Frac, 2> fwd, std::array<Frac, 2> inv, std::string nm = "")
        : from_vars(std::move(from)),
          to_vars(std::move(to)),
          forward(std::move(fwd)),
          inverse(std::move(inv)),
          name(std::move(nm)) {
        std::map<Sym, Frac> sub;
        for (int i = 0; i < 2; ++i) sub[state(to_vars[i])] = inverse[i];
        for (int i = 0; i < 2; ++i) {
            Frac back = subst_frac(forward[i], sub);
            if (back != Frac(Poly(state(from_vars[i]))))
                throw std::domain_error("RationalChart: forward o inverse != id (" + name + ")");
        }
    }

    RationalChart reversed() const {
        return RationalChart(to_vars, from_vars, inverse, forward, name + " (reversed)");
    }
};

/// Transformed vector field: (Dc)^{-1} (rhs o c), exact rational computation.
inline System apply_chart(const System& s, const RationalChart& c) {
    if (s.vars != c.from_vars)
        throw std::domain_error("apply_chart: variable names do not match chart");
    Sym u = state(c.to_vars[0]), v = state(c.to_vars[1]);

    Frac j00 = c.forward[0].partial(u), j01 = c.forward[0].partial(v);
    Frac j10 = c.forward[1].partial(u), j11 = c.forward[1].partial(v);
    Frac det = j00 * j11 - j01 * j10;
    if (det.is_zero()) throw SingularChart();

    std::map<Sym, Frac> sub;
    for (int i = 0; i < 2; ++i) sub[state(s.vars[i])] = c.forward[i];
    Frac f0 = subst_frac(s.rhs[0], sub);
    Frac f1 = subst_frac(s.rhs[1], sub);

    System out;
    out.vars = c.to_vars;
    out.label = s.label;
    out.rhs[0] = (j11 * f0 - j01 * f1) / det;
    out.rhs[1] = (j00 * f1 - j10 * f0) / det;
    return out;
}

/// Affine-in-state gauge transformation with a time reparametrization:
///   y = lambda Y + h,  z = mu Z + nu Y + k,  dt/dtau = timechange(t).
/// Kinds: T1 has nu = 0; T2 additionally mu = lambda; T3 is general.
struct AffineGauge {
    enum Kind { T1, T2, T3 } kind = T3;
    Frac lambda{Rat(1)}, mu{Rat(1)}, nu{Rat(0)}, h{Rat(0)}, k{Rat(0)};
    Frac timechange{Rat(1)};  // dt/dtau as a function of t
};

/// Transformed system in the new time variable; coefficients remain written
/// as functions of t (the reparametrization only scales the field).
inline System apply_gauge(const System& s, const AffineGauge& g) {
    if (g.lambda.is_zero() || g.mu.is_zero()) throw ZeroScale();
    if (g.kind == AffineGauge::T1 || g.kind == AffineGauge::T2) {
        if (!g.nu.is_zero()) throw std::domain_error("apply_gauge: T1/T2 require nu = 0");
    }
    if (g.kind == AffineGauge::T2 && g.mu != g.lambda)
        throw std::domain_error("apply_gauge: T2 requires mu = lambda");

    Sym Y = state(s.vars[0]), Z = state(s.vars[1]);
    std::map<Sym, Frac> sub;
    sub[Y] = g.lambda * Frac(Poly(Y)) + g.h;
    sub[Z] = g.mu * Frac(Poly(Z)) + g.nu * Frac(Poly(Y)) + g.k;
    Frac F0 = subst_frac(s.rhs[0], sub);
    Frac F1 = subst_frac(s.rhs[1], sub);

    const Frac& phi = g.timechange;
    System out;
    out.vars = s.vars;
    out.label = s.label;
    out.rhs[0] =
        phi / g.lambda * (F0 - g.lambda.derive() * Frac(Poly(Y)) - g.h.derive());
    out.rhs[1] = (phi * (F1 - g.mu.derive() * Frac(Poly(Z)) - g.nu.derive() * Frac(Poly(Y)) -
                         g.k.derive()) -
                  g.nu * out.rhs[0]) /
                 g.mu;
    return out;
}

/// Convenience constructors for the charts that occur repeatedly.
namespace charts {

/// y = 1/u, z = v/u (inverse u = 1/y, v = z/y)
inline RationalChart reciprocal_pair(const std::string& y = "y", const std::string& z = "z",
                                     const std::string& u = "u", const std::string& v = "v") {
    Sym su = state(u), sv = state(v), sy = state(y), sz = state(z);
    return RationalChart({y, z}, {u, v},
                         {Frac(Poly(Rat(1)), Poly(su)), Frac(Poly(sv), Poly(su))},
                         {Frac(Poly(Rat(1)), Poly(sy)), Frac(Poly(sz), Poly(sy))},
                         y + "=1/" + u + ", " + z + "=" + v + "/" + u);
}

}  // namespace charts

}  // namespace pql
