#pragma once

#include <string>

#include "pql/rewrite.hpp"
#include "pql/system.hpp"

namespace pql {

/// Total derivative of a state-and-time expression along the system.
inline Frac derivative_along(const System& s, const Frac& E) {
    return E.partial(state(s.vars[0])) * s.rhs[0] + E.partial(state(s.vars[1])) * s.rhs[1] +
           E.derive();
}

/// A candidate first integral with the assumptions (oriented rewrite rules)
/// under which it is conserved.
struct FirstIntegral {
    Frac H;
    RuleSet assumptions;
};

/// True iff the derivative of H along the system vanishes identically
/// modulo the assumptions.
inline bool verify_first_integral(const System& s, const FirstIntegral& fi) {
    Frac d = derivative_along(s, fi.H);
    return fi.assumptions.reduce(d).is_zero();
}

/// Scalar ODE given by a defining differential polynomial in one dependent
/// jet symbol; solutions are its zeros.
struct ScalarODE {
    int order = 2;
    std::string dep = "u";
    Poly defining;  // in jets of `dep` and coefficient symbols
    std::string name;
};

namespace scalar {

inline ScalarODE p1(const Poly& f, const std::string& dep = "u") {
    Poly u(jet(dep)), u2(jet(dep, 2));
    return {2, dep, u2 - Rat(6) * u * u - f, "u'' = 6u^2 + f"};
}

inline ScalarODE p2(const Poly& f, const Poly& g, const std::string& dep = "u") {
    Poly u(jet(dep)), u2(jet(dep, 2));
    return {2, dep, u2 - Rat(2) * u.pow(3) - f * u - g, "u'' = 2u^3 + fu + g"};
}

/// Cleared-denominator form of the rational second-order equation:
/// 2u u'' - (u')^2 - 3u^4 - 8fu^3 - 4(f^2 - alpha)u^2 + beta^2 = 0.
inline ScalarODE p4(const Poly& f, const Poly& alpha, const Poly& beta,
                    const std::string& dep = "u") {
    Poly u(jet(dep)), u1(jet(dep, 1)), u2(jet(dep, 2));
    Poly def = Rat(2) * u * u2 - u1 * u1 - Rat(3) * u.pow(4) - Rat(8) * f * u.pow(3) -
               Rat(4) * (f * f - alpha) * u * u + beta * beta;
    return {2, dep, def, "u'' = (u')^2/(2u) + (3/2)u^3 + 4fu^2 + 2(f^2-a)u - b^2/(2u)"};
}

inline ScalarODE damped_cubic(const Poly& q, const std::string& dep = "u") {
    Poly u(jet(dep)), u1(jet(dep, 1)), u2(jet(dep, 2));
    return {2, dep, u2 + u * u1 - u.pow(3) + Rat(12) * q * u - Rat(12) * q.derive(),
            "u'' = -uu' + u^3 - 12qu + 12q'"};
}

inline ScalarODE linear3(const Poly& b, const std::string& dep = "w") {
    Poly w(jet(dep)), w3(jet(dep, 3));
    return {3, dep, w3 - Rat(2) * b * w, "w''' = 2bw"};
}

}  // namespace scalar

/// Substitute a state expression for the scalar dependent variable and check
/// that the defining polynomial vanishes along the system (modulo rules).
inline bool reduction_holds(const System& s, const Frac& E, const ScalarODE& ode,
                            const RuleSet& rules = {}) {
    int maxord = 0;
    for (const Sym& sym : ode.defining.symbols())
        if (sym.name == ode.dep) maxord = std::max(maxord, sym.order);
    std::map<Sym, Frac> images;
    Frac cur = rules.reduce(E);
    for (int k = 0; k <= maxord; ++k) {
        images[jet(ode.dep, k)] = cur;
        cur = rules.reduce(derivative_along(s, cur));
    }
    Frac res = subst_frac(ode.defining, images);
    return rules.reduce(res).is_zero();
}

/// Check a purely differential substitution (dep-for-dep, no system):
/// substituting `image` for the dependent symbol of `inner` yields a
/// multiple of `outer`'s defining polynomial.
inline Frac scalar_substitution_residual(const ScalarODE& inner, const Frac& image,
                                         const RuleSet& rules = {}) {
    int maxord = 0;
    for (const Sym& sym : inner.defining.symbols())
        if (sym.name == inner.dep) maxord = std::max(maxord, sym.order);
    std::map<Sym, Frac> images;
    Frac cur = rules.reduce(image);
    for (int k = 0; k <= maxord; ++k) {
        images[jet(inner.dep, k)] = cur;
        cur = rules.reduce(cur.derive());
    }
    return rules.reduce(subst_frac(inner.defining, images));
}

struct SecondOrderReduction {
    ScalarODE ode;
    Frac substitution;  // scalar dependent variable as a state expression
    RuleSet rules;      // family conditions under which the reduction holds
};

/// Birational equivalence between a family normal form and the first-order
/// system of a scalar equation. Forward maps source state to target state;
/// both directions are rational in the state for fixed t.
struct EquivalenceMap {
    System source;
    std::array<std::string, 2> tvars{"u", "v"};
    std::array<Frac, 2> forward;   // in source state + params
    std::array<Frac, 2> backward;  // in target state + params
    System target;                 // rhs in target state, params from the source
    RuleSet rules;                 // conditions needed for the field transport
    std::string target_name;
};

/// backward(forward) = id and forward(backward) = id as rational maps.
inline bool equivalence_round_trips(const EquivalenceMap& m) {
    std::map<Sym, Frac> fwd{{state(m.tvars[0]), m.forward[0]},
                            {state(m.tvars[1]), m.forward[1]}};
    for (int i = 0; i < 2; ++i) {
        Frac got = subst_frac(m.backward[i], fwd);
        if (!(got == Frac(Poly(state(m.source.vars[i]))))) return false;
    }
    std::map<Sym, Frac> bwd{{state(m.source.vars[0]), m.backward[0]},
                            {state(m.source.vars[1]), m.backward[1]}};
    for (int i = 0; i < 2; ++i) {
        Frac got = subst_frac(m.forward[i], bwd);
        if (!(got == Frac(Poly(state(m.tvars[i]))))) return false;
    }
    return true;
}

/// The transported source field equals the target field (modulo the rules).
inline bool equivalence_transport_matches(const EquivalenceMap& m) {
    std::map<Sym, Frac> fwd{{state(m.tvars[0]), m.forward[0]},
                            {state(m.tvars[1]), m.forward[1]}};
    for (int i = 0; i < 2; ++i) {
        Frac lhs = m.rules.reduce(derivative_along(m.source, m.forward[i]));
        Frac rhs = m.rules.reduce(subst_frac(m.target.rhs[i], fwd));
        if (!(lhs == rhs)) return false;
    }
    return true;
}

namespace detail_red {

inline Poly sy(const std::string& n, int k = 0) { return Poly(jet(n, k)); }
inline Poly st_(const std::string& v) { return Poly(state(v)); }

inline System make_sys(std::array<std::string, 2> vars, Frac r0, Frac r1) {
    System s;
    s.vars = vars;
    s.rhs = {std::move(r0), std::move(r1)};
    return s;
}

}  // namespace detail_red

/// Second-order (or third-order) scalar reductions of the families that
/// admit them, on their reduced normal forms.
inline SecondOrderReduction second_order_reduction(const std::string& family) {
    using namespace detail_red;
    Poly y = st_("y"), z = st_("z");

    if (family == "IX.B(2)") {
        // y' = -y^2 + z + 12q, z' = yz;   u = z/6 + q solves u'' = 6u^2 + f
        System s = make_sys({"y", "z"}, Frac(-y * y + z + Rat(12) * sy("q")), Frac(y * z));
        Poly f = sy("q", 2) - Rat(6) * sy("q") * sy("q");
        return {scalar::p1(f), Frac(z) * Frac(Rat(1, 6)) + Frac(sy("q")), {}};
    }
    if (family == "XIII") {
        // a = 0 form; u = y/2 - p solves the cubic second-order equation
        System s = make_sys(
            {"y", "z"},
            Frac(Rat(1, 2) * y * (Rat(2) * z - y) + Rat(2) * sy("p") * y),
            Frac(Rat(1, 2) * z * (Rat(3) * y - Rat(2) * z) - Rat(4) * sy("p") * z + sy("b")));
        Poly f = Rat(2) * sy("p", 1) - Rat(2) * sy("p") * sy("p") + sy("b");
        Poly g = -sy("p", 2) + Rat(2) * sy("p") * sy("p", 1) + sy("b") * sy("p");
        return {scalar::p2(f, g), Frac(y) * Frac(Rat(1, 2)) - Frac(sy("p")), {}};
    }
    if (family == "IX(-3)") {
        // D = 0 form: y itself solves y'' + 6yy' + 4y^3 - b = 0
        Poly u(jet("u")), u1(jet("u", 1)), u2(jet("u", 2));
        ScalarODE ode{2, "u", u2 + Rat(6) * u * u1 + Rat(4) * u.pow(3) - sy("b"),
                      "u'' + 6uu' + 4u^3 = b"};
        return {ode, Frac(y), {}};
    }
    if (family == "IX.B(5)") {
        // u = -2y solves u'' = -uu' + u^3 - 12qu + 12q'
        return {scalar::damped_cubic(sy("q")), Frac(Rat(-2) * y), {}};
    }
    if (family == "XIV") {
        // u = z + p solves the same equation for q = (p' + p^2 - r)/12,
        // assuming r' = pr
        Poly q = Rat(1, 12) * (sy("p", 1) + sy("p") * sy("p") - sy("r"));
        RuleSet rules;
        rules.add(Rule{jet("r", 1), sy("p") * sy("r")});
        return {scalar::damped_cubic(rules.reduce(q)), Frac(z + sy("p")), rules};
    }
    throw std::domain_error("second_order_reduction: no reduction scripted for " + family);
}

/// The birational equivalences between normal forms and scalar first-order
/// systems: forward/backward maps plus the transported target field.
inline EquivalenceMap equivalence_map(const std::string& family) {
    using namespace detail_red;
    Poly y = st_("y"), z = st_("z");
    Sym U = state("u"), V = state("v");
    Frac uf{Poly(U)}, vf{Poly(V)};

    auto v_target = [&](const Poly& f) {
        return make_sys({"u", "v"}, vf, Frac(Rat(6) * Poly(U) * Poly(U) + f));
    };

    if (family == "IX.B(2)") {
        EquivalenceMap m;
        m.source = make_sys({"y", "z"}, Frac(-y * y + z + Rat(12) * sy("q")), Frac(y * z));
        Frac q{sy("q")};
        m.forward = {Frac(z) * Frac(Rat(1, 6)) + q, Frac(y * z) * Frac(Rat(1, 6)) + q.derive()};
        m.backward = {(vf - q.derive()) / (uf - q), Frac(Rat(6)) * (uf - q)};
        m.target = v_target(sy("q", 2) - Rat(6) * sy("q") * sy("q"));
        m.target_name = "first-order system of u'' = 6u^2 + f, f = q'' - 6q^2";
        return m;
    }
    if (family == "IX.B(5)") {
        EquivalenceMap m;
        m.source = make_sys({"y", "z"}, Frac(-y * y + z + Rat(3) * sy("q")),
                            Frac(Rat(4) * y * z - Rat(9) * sy("q", 1)));
        Frac q{sy("q")};
        Frac u = Frac(Rat(-2) * y);
        Frac du = derivative_along(m.source, u);
        m.forward = {u * u * Frac(Rat(1, 6)) - q + du * Frac(Rat(1, 6)),
                     u * u * u * Frac(Rat(1, 6)) - Frac(Rat(2)) * u * q +
                         u * du * Frac(Rat(1, 6)) + q.derive()};
        // u = (v - q')/(u - q), then y = -u/2, z = 3(y^2 - 2q - w1)
        Frac ub = (vf - q.derive()) / (uf - q);
        Frac yb = ub * Frac(Rat(-1, 2));
        m.backward = {yb, Frac(Rat(3)) * (yb * yb - Frac(Rat(2)) * q - uf)};
        m.target = v_target(sy("q", 2) - Rat(6) * sy("q") * sy("q"));
        m.target_name = "first-order system of u'' = 6u^2 + f, f = q'' - 6q^2";
        return m;
    }
    if (family == "XIV") {
        EquivalenceMap m;
        m.source = make_sys({"y", "z"},
                            Frac(y * (Rat(2) * z - y) + Rat(3) * sy("p") * y + sy("r")),
                            Frac(z * (y - z) - Rat(2) * sy("p") * z));
        m.rules.add(Rule{jet("r", 1), sy("p") * sy("r")});
        Frac q = Frac(Rat(1, 12) * (sy("p", 1) + sy("p") * sy("p") - sy("r")));
        Frac qd = m.rules.reduce(q.derive());
        Frac u = Frac(z + sy("p"));
        Frac du = m.rules.reduce(derivative_along(m.source, u));
        m.forward = {u * u * Frac(Rat(1, 6)) - q + du * Frac(Rat(1, 6)),
                     u * u * u * Frac(Rat(1, 6)) - Frac(Rat(2)) * u * q +
                         u * du * Frac(Rat(1, 6)) + qd};
        Frac ub = (vf - qd) / (uf - q);
        Frac zb = ub - Frac(sy("p"));
        // u' = 6 w1 - u^2 + 6q; and  u' = z(y-z) - 2pz + p'  solves for y
        Frac dub = Frac(Rat(6)) * uf - ub * ub + Frac(Rat(6)) * q;
        Frac yb = (dub - Frac(sy("p", 1)) + zb * zb + Frac(Rat(2) * sy("p")) * zb) / zb;
        m.backward = {m.rules.reduce(yb), m.rules.reduce(zb)};
        // target f = (q'' - 6 q^2) with q the parameter expression
        Frac f = m.rules.reduce(q.derive().derive() - Frac(Rat(6)) * q * q);
        m.target = make_sys({"u", "v"}, vf, Frac(Rat(6) * Poly(U) * Poly(U)) + f);
        m.target_name = "first-order system of u'' = 6u^2 + f, f = q'' - 6q^2, q = (p'+p^2-r)/12";
        return m;
    }
    if (family == "XIII") {
        EquivalenceMap m;
        m.source = make_sys(
            {"y", "z"},
            Frac(Rat(1, 2) * y * (Rat(2) * z - y) + Rat(2) * sy("p") * y),
            Frac(Rat(1, 2) * z * (Rat(3) * y - Rat(2) * z) - Rat(4) * sy("p") * z + sy("b")));
        Frac w1 = Frac(y) * Frac(Rat(1, 2)) - Frac(sy("p"));
        m.forward = {w1, derivative_along(m.source, w1)};
        Frac yb = Frac(Rat(2)) * (uf + Frac(sy("p")));
        // z = (y' - 2py)/y + y/2 with y' = 2(v + p')
        Frac dyb = Frac(Rat(2)) * (vf + Frac(sy("p", 1)));
        Frac zb = (dyb - Frac(Rat(2) * sy("p")) * yb) / yb + yb * Frac(Rat(1, 2));
        m.backward = {yb, zb};
        Poly f = Rat(2) * sy("p", 1) - Rat(2) * sy("p") * sy("p") + sy("b");
        Poly g = -sy("p", 2) + Rat(2) * sy("p") * sy("p", 1) + sy("b") * sy("p");
        m.target = make_sys({"u", "v"}, vf,
                            Frac(Rat(2) * Poly(U).pow(3) + f * Poly(U) + g));
        m.target_name = "first-order system of u'' = 2u^3 + fu + g";
        return m;
    }
    if (family == "IX.B(3)") {
        EquivalenceMap m;
        m.source = make_sys({"y", "z"}, Frac(-y * y + z + sy("a")),
                            Frac(Rat(2) * y * z + sy("b")));
        m.forward = {Frac(y), derivative_along(m.source, Frac(y))};
        m.backward = {uf, vf + uf * uf - Frac(sy("a"))};
        Poly f = Rat(-2) * sy("a");
        Poly g = sy("b") + sy("a", 1);
        m.target = make_sys({"u", "v"}, vf,
                            Frac(Rat(2) * Poly(U).pow(3) + f * Poly(U) + g));
        m.target_name = "first-order system of u'' = 2u^3 + fu + g, f = -2a, g = b + a'";
        return m;
    }
    if (family == "XII") {
        EquivalenceMap m;
        m.source = make_sys(
            {"y", "z"}, Frac(y * (Rat(2) * z + y) + Rat(2) * sy("f") * y - sy("a")),
            Frac(-z * (Rat(2) * y + z) - Rat(2) * sy("f") * z + sy("b")));
        m.forward = {Frac(y), derivative_along(m.source, Frac(y))};
        m.backward = {uf, (vf - uf * uf - Frac(Rat(2) * sy("f")) * uf + Frac(sy("a"))) /
                              (Frac(Rat(2)) * uf)};
        Poly alpha = Rat(1, 2) * sy("a") - sy("b") - sy("f", 1);
        Poly beta = sy("a");
        Poly f = sy("f");
        Frac W2 = vf, W1 = uf;
        Frac rhs = W2 * W2 / (Frac(Rat(2)) * W1) + Frac(Rat(3, 2)) * W1 * W1 * W1 +
                   Frac(Rat(4) * f) * W1 * W1 +
                   Frac(Rat(2) * (f * f - alpha)) * W1 -
                   Frac(beta * beta) / (Frac(Rat(2)) * W1);
        m.target = make_sys({"u", "v"}, vf, rhs);
        m.rules.add(Rule{jet("a", 1), Poly()});
        m.rules.add(Rule{jet("b", 1), Poly()});
        m.rules.add(Rule{jet("f", 2), Poly()});
        m.target_name =
            "first-order system of the rational P4-type equation, alpha = a/2 - b - f', beta = a";
        return m;
    }
    throw std::domain_error("equivalence_map: no map scripted for " + family);
}

}  // namespace pql
