#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "pql/chart.hpp"
#include "pql/system.hpp"
#include "pql/upoly.hpp"

namespace pql {

/// Coefficient bindings: each symbol name mapped to an explicit polynomial
/// in t with Gaussian-rational coefficients. Jets evaluate to derivatives of
/// the binding, so the bound family is differentially consistent.
using Bindings = std::map<std::string, UPoly<GaussRat>>;

struct UnboundSymbol : std::domain_error {
    explicit UnboundSymbol(const std::string& name)
        : std::domain_error("unbound coefficient symbol: " + name) {}
};

/// A system with every coefficient symbol bound, compactified by an atlas
/// of rational charts (chart 0 is the identity). Transitions between charts
/// are precomposed symbolically.
class NumericInstance {
public:
    NumericInstance(System sys, Bindings bindings, std::vector<RationalChart> extra_charts = {})
        : sys_(std::move(sys)), bind_(std::move(bindings)) {
        // validate: every non-state symbol bound
        for (int i = 0; i < 2; ++i)
            for (const Sym& s : sys_.rhs[i].symbols()) {
                if (s.kind == SymKind::State || s.kind == SymKind::Time) continue;
                if (!bind_.count(s.name)) throw UnboundSymbol(s.name);
            }
        charts_.push_back(sys_);  // chart 0: identity
        chart_from_.push_back({Frac(Poly(state(sys_.vars[0]))), Frac(Poly(state(sys_.vars[1])))});
        chart_to_.push_back(chart_from_[0]);
        if (extra_charts.empty()) extra_charts = default_atlas();
        for (auto& c : extra_charts) {
            charts_.push_back(apply_chart(sys_, c));
            chart_from_.push_back(c.forward);  // original state in chart coords
            chart_to_.push_back(c.inverse);    // chart coords in original state
        }
        max_jet_ = 0;
        for (auto& s : charts_)
            for (int i = 0; i < 2; ++i)
                for (const Sym& sym : s.rhs[i].symbols())
                    if (sym.kind == SymKind::Jet || sym.kind == SymKind::Const)
                        max_jet_ = std::max(max_jet_, sym.order);
        // slack covers jets queried by transported expressions (equivalence
        // maps differentiate the bindings a few extra times)
        for (auto& [name, p] : bind_) {
            auto& d = derivs_[name];
            d.push_back(p);
            for (int k = 1; k <= max_jet_ + 8; ++k) d.push_back(d.back().derivative());
        }
    }

    /// Projective-plane atlas: (1/y, z/y) and (y/z, 1/z).
    std::vector<RationalChart> default_atlas() const {
        const std::string& y = sys_.vars[0];
        const std::string& z = sys_.vars[1];
        Sym sy = state(y), sz = state(z), u = state("c1u"), v = state("c1v"), p = state("c2u"),
            q = state("c2v");
        std::vector<RationalChart> r;
        r.push_back(RationalChart(
            {y, z}, {"c1u", "c1v"},
            {Frac(Poly(Rat(1)), Poly(u)), Frac(Poly(v), Poly(u))},
            {Frac(Poly(Rat(1)), Poly(sy)), Frac(Poly(sz), Poly(sy))}, "reciprocal-first"));
        r.push_back(RationalChart(
            {y, z}, {"c2u", "c2v"},
            {Frac(Poly(p), Poly(q)), Frac(Poly(Rat(1)), Poly(q))},
            {Frac(Poly(sy), Poly(sz)), Frac(Poly(Rat(1)), Poly(sz))}, "reciprocal-second"));
        return r;
    }

    const System& system() const { return sys_; }
    const Bindings& bindings() const { return bind_; }
    int chart_count() const { return static_cast<int>(charts_.size()); }
    const System& chart_system(int i) const { return charts_[i]; }

    /// chart coordinates -> original state expressions (of chart i)
    const std::array<Frac, 2>& to_original(int i) const { return chart_from_[i]; }
    /// original state -> chart coordinates expressions
    const std::array<Frac, 2>& from_original(int i) const { return chart_to_[i]; }

    template <class R>
    std::complex<R> jet_value(const std::string& name, int order, std::complex<R> t) const {
        auto it = derivs_.find(name);
        if (it == derivs_.end()) throw UnboundSymbol(name);
        if (order >= (int)it->second.size()) return {};
        std::complex<R> acc{};
        auto& coeffs = it->second[order].coeffs();
        for (auto c = coeffs.rbegin(); c != coeffs.rend(); ++c)
            acc = acc * t + c->template to_complex<R>();
        return acc;
    }

    /// Evaluate a polynomial in (two state symbols of `vars`) at a point.
    template <class R>
    std::complex<R> eval_poly(const Poly& p, const std::array<std::string, 2>& vars,
                              const std::array<std::complex<R>, 2>& x,
                              std::complex<R> t) const {
        using C = std::complex<R>;
        C acc{};
        for (auto& [m, c] : p.terms()) {
            C term = C(static_cast<R>(c.to_long_double()));
            for (auto& [s, e] : m.factors) {
                C v;
                if (s.kind == SymKind::State)
                    v = s.name == vars[0] ? x[0] : x[1];
                else if (s.kind == SymKind::Time)
                    v = t;
                else
                    v = jet_value(s.name, s.order, t);
                for (int i = 0; i < e; ++i) term *= v;
            }
            acc += term;
        }
        return acc;
    }

    template <class R>
    std::complex<R> eval_frac(const Frac& f, const std::array<std::string, 2>& vars,
                              const std::array<std::complex<R>, 2>& x,
                              std::complex<R> t) const {
        return eval_poly<R>(f.num(), vars, x, t) / eval_poly<R>(f.den(), vars, x, t);
    }

    /// Field of chart i at chart coordinates x, time t.
    template <class R>
    std::array<std::complex<R>, 2> field(int i, const std::array<std::complex<R>, 2>& x,
                                         std::complex<R> t) const {
        const System& s = charts_[i];
        return {eval_frac<R>(s.rhs[0], s.vars, x, t), eval_frac<R>(s.rhs[1], s.vars, x, t)};
    }

    /// Convert chart-i coordinates to chart-j coordinates (through the
    /// original state expressions, composed symbolically would be cleaner
    /// but numerically the intermediate stays finite whenever the target
    /// chart is the right one to switch to).
    template <class R>
    std::array<std::complex<R>, 2> convert(int i, int j,
                                           const std::array<std::complex<R>, 2>& x,
                                           std::complex<R> t) const {
        if (i == j) return x;
        // original = to_original(i)(x); target = from_original(j)(original)
        using C = std::complex<R>;
        const System& si = charts_[i];
        C y = eval_frac<R>(chart_from_[i][0], si.vars, x, t);
        C z = eval_frac<R>(chart_from_[i][1], si.vars, x, t);
        const System& s0 = charts_[0];
        std::array<C, 2> orig{y, z};
        return {eval_frac<R>(chart_to_[j][0], s0.vars, orig, t),
                eval_frac<R>(chart_to_[j][1], s0.vars, orig, t)};
    }

private:
    System sys_;
    Bindings bind_;
    std::vector<System> charts_;
    std::vector<std::array<Frac, 2>> chart_from_;  // chart coords -> original
    std::vector<std::array<Frac, 2>> chart_to_;    // original -> chart coords
    std::map<std::string, std::vector<UPoly<GaussRat>>> derivs_;
    int max_jet_ = 0;
};

}  // namespace pql
