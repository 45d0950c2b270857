#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "pql/fraction.hpp"
#include "pql/quadpair.hpp"

namespace pql {

struct DegenerateTop : std::domain_error {
    DegenerateTop() : std::domain_error("no nonlinear dominant part") {}
};

/// Planar system of first-order ODEs: rhs rational in the two state
/// variables with differential-fraction coefficients. "Polynomial" systems
/// are those whose rhs denominators are free of the state variables.
struct System {
    std::array<std::string, 2> vars{"y", "z"};
    std::array<Frac, 2> rhs;
    std::string label;

    Sym var_sym(int i) const { return state(vars[i]); }

    bool is_polynomial() const {
        for (int i = 0; i < 2; ++i)
            for (auto v : {0, 1})
                if (rhs[i].den().contains(var_sym(v))) return false;
        return true;
    }

    friend bool operator==(const System& a, const System& b) {
        return a.vars == b.vars && a.rhs == b.rhs;
    }

    std::string str() const {
        std::string s;
        for (int i = 0; i < 2; ++i)
            s += "d" + vars[i] + " = " + rhs[i].str() + (i == 0 ? "\n" : "");
        return s;
    }
};

/// Split a state-polynomial rhs by state monomials: (i, j) -> coefficient.
inline std::map<std::pair<int, int>, Frac> collect_state(const System& s, int eq) {
    Sym vy = s.var_sym(0), vz = s.var_sym(1);
    const Frac& f = s.rhs[eq];
    if (f.den().contains(vy) || f.den().contains(vz))
        throw std::domain_error("collect_state: rhs not polynomial in the state");
    std::map<std::pair<int, int>, Poly> nums;
    for (auto& [m, c] : f.num().terms()) {
        int i = m.exponent(vy), j = m.exponent(vz);
        Mono rest;
        for (auto& [x, e] : m.factors)
            if (!(x == vy) && !(x == vz)) rest.factors.push_back({x, e});
        nums[{i, j}].add_term(rest, c);
    }
    std::map<std::pair<int, int>, Frac> out;
    for (auto& [k, p] : nums)
        if (!p.is_zero()) out[k] = Frac(p, f.den());
    return out;
}

/// Build a state-polynomial rhs from monomial coefficients.
inline Frac assemble_state(const System& s, const std::map<std::pair<int, int>, Frac>& coeffs) {
    Sym vy = s.var_sym(0), vz = s.var_sym(1);
    Frac acc;
    for (auto& [k, c] : coeffs) {
        Poly m(Mono::var(vy, k.first) * Mono::var(vz, k.second), Rat(1));
        acc += c * Frac(m);
    }
    return acc;
}

/// Weighted dominant part: for weights (w1, w2), equation i keeps the state
/// monomials of weighted degree w_i + 1 (the scaling-limit component).
/// Coefficients are kept as-is (symbols frozen at order 0).
inline System dominant_part(const System& s, std::array<int, 2> weights) {
    System out;
    out.vars = s.vars;
    out.label = s.label;
    bool any_nonlinear = false;
    for (int eq = 0; eq < 2; ++eq) {
        auto coeffs = collect_state(s, eq);
        std::map<std::pair<int, int>, Frac> keep;
        int target = weights[eq] + 1;
        for (auto& [k, c] : coeffs) {
            int w = k.first * weights[0] + k.second * weights[1];
            if (w == target) {
                keep[k] = c;
                if (k.first + k.second >= 2) any_nonlinear = true;
            }
        }
        out.rhs[eq] = assemble_state(out, keep);
    }
    if (!any_nonlinear && weights == std::array<int, 2>{1, 1}) throw DegenerateTop();
    if (out.rhs[0].is_zero() && out.rhs[1].is_zero()) throw DegenerateTop();
    return out;
}

/// The (1,1)-dominant part as a pair of quadratic forms; requires rational
/// constant coefficients.
inline QuadPair quadratic_part(const System& s) {
    System top = dominant_part(s, {1, 1});
    QuadPair q;
    for (int eq = 0; eq < 2; ++eq) {
        auto coeffs = collect_state(top, eq);
        for (auto& [k, c] : coeffs) {
            if (k.first + k.second != 2)
                throw std::domain_error("quadratic_part: dominant part not quadratic");
            if (!c.is_constant())
                throw std::domain_error("quadratic_part: non-constant quadratic coefficient");
            std::array<Rat, 3>& row = eq == 0 ? q.P : q.Q;
            int idx = k.second;  // (2,0)->0, (1,1)->1, (0,2)->2
            row[idx] = c.constant_value();
        }
    }
    if (q.is_zero()) throw DegenerateTop();
    return q;
}

}  // namespace pql
