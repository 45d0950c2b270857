#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pql/canonical.hpp"
#include "pql/catalog.hpp"
#include "pql/chart.hpp"
#include "pql/table2.hpp"

namespace pql {

struct ShapeMismatch : std::domain_error {
    explicit ShapeMismatch(const std::string& why)
        : std::domain_error("ShapeMismatch: " + why) {}
};
struct NotASymmetry : std::domain_error {
    explicit NotASymmetry(const std::string& why) : std::domain_error("NotASymmetry: " + why) {}
};
struct ConditionsNotSatisfied : std::domain_error {
    explicit ConditionsNotSatisfied(const std::string& why)
        : std::domain_error("ConditionsNotSatisfied: " + why) {}
};

/// Substitute name-indexed fraction values for jet symbols (images of
/// higher jets are derivatives of the image).
inline Frac subst_params_frac(const Poly& p, const std::map<std::string, Frac>& vals) {
    std::map<Sym, Frac> images;
    for (const Sym& s : p.symbols()) {
        if (s.kind != SymKind::Jet) continue;
        auto it = vals.find(s.name);
        if (it == vals.end()) continue;
        Frac img = it->second;
        for (int k = 0; k < s.order; ++k) img = img.derive();
        images[s] = img;
    }
    return subst_frac(p, images);
}

inline Frac subst_params_frac(const Frac& f, const std::map<std::string, Frac>& vals) {
    return subst_params_frac(f.num(), vals) / subst_params_frac(f.den(), vals);
}

// ---------------------------------------------------------------------------
// pipeline step kinds (data, not code: scripted sequences per family)

struct ChartCondStep {
    RationalChart chart;
    std::array<Frac, 2> point;
    std::optional<int> expect_index;
    std::string note;
    bool impose = true;
};

struct SymmetryStep {
    std::array<Frac, 2> map_fwd;  // new state in terms of old (y, z)
    std::array<Frac, 2> map_inv;  // old state in terms of new
    std::map<std::string, Poly> action;  // slot-symbol images
    std::string note;
};

struct SubstStep {
    std::map<std::string, Poly> subst;  // parameter renaming, e.g. a -> 12q
    std::map<std::string, Frac> back;   // inverse, for evaluating inputs
    std::string note;
};

struct StatedStep {
    Poly condition;
    std::string note;
};

using PipelineStep = std::variant<ChartCondStep, SymmetryStep, SubstStep, StatedStep>;

struct Pipeline {
    std::string family;  // display id, e.g. "VIII(3)"
    System shape;        // general post-gauge form with slot symbols
    std::vector<std::string> slot_names;
    std::vector<PipelineStep> steps;
    std::string sufficiency;
};

// ---------------------------------------------------------------------------

struct ConditionStep {
    std::string note;
    Poly condition;  // normalized; zero when satisfied identically
};

struct ConditionReport {
    std::string family;
    std::vector<ConditionStep> steps;
    std::vector<Poly> final_conditions;            // nonzero, derivation order
    std::vector<Frac> evaluated_conditions;        // at the input coefficients
    std::map<std::string, std::string> glossary;   // renamed parameters
    std::string sufficiency;
    std::string verdict;  // free | free-given-conditions | conditions-violated | undetermined
};

namespace fam {

using detail::fr;
using detail::st;
using detail::sy;

inline Frac F0() { return Frac(); }
inline Frac F1() { return Frac(Rat(1)); }

inline RationalChart chart_uv_over_u() {  // y = 1/u, z = v/u
    return charts::reciprocal_pair();
}

inline RationalChart chart_ix() {  // y = 1/u, z = v/u^2
    Sym u = state("u"), v = state("v"), y = state("y"), z = state("z");
    return RationalChart({"y", "z"}, {"u", "v"},
                         {Frac(Poly(Rat(1)), Poly(u)), Frac(Poly(v), Poly(Mono::var(u, 2), Rat(1)))},
                         {Frac(Poly(Rat(1)), Poly(y)), Frac(Poly(z), Poly(Mono::var(y, 2), Rat(1)))},
                         "y=1/u, z=v/u^2");
}

inline RationalChart chart_neg_recip_y() {  // y = -1/u, z = z
    Sym u = state("u"), y = state("y"), z = state("z");
    return RationalChart({"y", "z"}, {"u", "z"},
                         {Frac(Poly(Rat(-1)), Poly(u)), Frac(Poly(z))},
                         {Frac(Poly(Rat(-1)), Poly(y)), Frac(Poly(z))}, "y=-1/u");
}

/// shape builder: quadratic part + fixed state terms + slot terms
struct ShapeBuilder {
    System s;
    std::vector<std::string> slots;
    ShapeBuilder() {
        s.vars = {"y", "z"};
        s.rhs = {Frac(), Frac()};
    }
    ShapeBuilder& quad(const QuadPair& q) {
        Sym y = state("y"), z = state("z");
        for (int eq = 0; eq < 2; ++eq) {
            auto& row = eq == 0 ? q.P : q.Q;
            Poly p;
            p.add_term(Mono::var(y, 2), row[0]);
            p.add_term(Mono::var(y, 1) * Mono::var(z, 1), row[1]);
            p.add_term(Mono::var(z, 2), row[2]);
            s.rhs[eq] += Frac(p);
        }
        return *this;
    }
    ShapeBuilder& fixed(int eq, int i, int j, Rat c) {
        Sym y = state("y"), z = state("z");
        s.rhs[eq] += Frac(Poly(Mono::var(y, i) * Mono::var(z, j), c));
        return *this;
    }
    ShapeBuilder& slot(int eq, int i, int j, const std::string& name, Rat factor = Rat(1)) {
        Sym y = state("y"), z = state("z");
        s.rhs[eq] += Frac(Poly(Mono::var(y, i) * Mono::var(z, j), factor) * Poly(jet(name)));
        if (std::find(slots.begin(), slots.end(), name) == slots.end()) slots.push_back(name);
        return *this;
    }
};

inline Pipeline make(const std::string& name, int n);

}  // namespace fam

/// Build the scripted pipeline for one family; n is required for the
/// parametric families (VIII) and fixed by the name otherwise.
inline Pipeline fam::make(const std::string& name, int n) {
    Pipeline pl;
    auto rep = [](BureauType::Label l, long long nn = 0) { return table2_representative(l, nn); };

    if (name == "I") {
        ShapeBuilder b;
        b.quad(rep(BureauType::I)).slot(0, 0, 1, "a");
        pl = {name, b.s, b.slots, {}, "extends holomorphically to the projective plane"};
    } else if (name == "III") {
        // normal form with the sign of y flipped relative to the shared
        // family representative: y' = y^2, z' = 2yz + ay
        ShapeBuilder b;
        QuadPair q3;
        q3.P = {Rat(1), Rat(0), Rat(0)};
        q3.Q = {Rat(0), Rat(2), Rat(0)};
        b.quad(q3).slot(1, 1, 0, "a");
        pl = {name, b.s, b.slots, {}, "y solves a Riccati equation; z a linear equation"};
    } else if (name == "V0") {
        ShapeBuilder b;
        b.quad(rep(BureauType::V));
        pl = {name, b.s, b.slots, {}, "y and z solve linear equations"};
    } else if (name == "VII0") {
        ShapeBuilder b;
        b.quad(rep(BureauType::VII)).slot(1, 0, 0, "a");
        pl = {name, b.s, b.slots, {}, "y constant; z solves a linear equation"};
    } else if (name == "IX.A0") {
        ShapeBuilder b;
        b.quad(rep(BureauType::IX, -n)).slot(1, 1, 0, "a");
        pl = {name + "(" + std::to_string(n) + ")", b.s, b.slots, {},
              "explicit quadrature; negative index produces no movable critical points"};
    } else if (name == "IX.B0") {
        ShapeBuilder b;
        b.quad(rep(BureauType::IX, n)).slot(1, 1, 0, "p");
        pl = {name + "(" + std::to_string(n) + ")", b.s, b.slots, {},
              "explicit quadrature z = (t-t0)^(n-1) Int p(s) (s-t0)^(-n) ds"};
        pl.steps.push_back(StatedStep{sy("p", n - 1),
                                      "vanishing derivative of order n-1 removes the logarithm"});
    } else if (name == "II") {
        ShapeBuilder b;
        b.quad(rep(BureauType::II)).slot(0, 1, 0, "A").slot(0, 0, 0, "a").slot(1, 1, 0, "C");
        pl = {name, b.s, b.slots, {}, "u = y - z solves the Riccati equation u' = u^2 + a"};
        pl.steps.push_back(ChartCondStep{chart_uv_over_u(), {F0(), F0()}, 1, "index-1 point at (u,v)=(0,0)"});
        pl.steps.push_back(ChartCondStep{chart_uv_over_u(), {F0(), F1()}, 1, "index-1 point at (u,v)=(0,1)"});
    } else if (name == "IV") {
        ShapeBuilder b;
        b.quad(rep(BureauType::IV)).slot(0, 0, 1, "B").slot(1, 1, 0, "C");
        pl = {name, b.s, b.slots, {}, "y solves a Riccati equation with holomorphic coefficients"};
        pl.steps.push_back(ChartCondStep{chart_uv_over_u(), {F0(), F0()}, 1, "index-1 point at (u,v)=(0,0)"});
    } else if (name == "V") {
        ShapeBuilder b;
        b.quad(rep(BureauType::V)).fixed(0, 0, 1, Rat(1)).slot(1, 0, 0, "f");
        pl = {name, b.s, b.slots, {}, "second-order form y'' = 6y^2 + f"};
        pl.steps.push_back(StatedStep{sy("f", 2), "linearity of f in t"});
    } else if (name == "VI") {
        ShapeBuilder b;
        b.quad(rep(BureauType::VI)).slot(0, 0, 1, "B").slot(0, 0, 0, "a").slot(1, 0, 0, "b");
        pl = {name, b.s, b.slots, {}, "z solves a Riccati equation with holomorphic coefficients"};
        Sym u = state("u"), v = state("v"), y = state("y"), z = state("z");
        RationalChart c({"y", "z"}, {"u", "v"},
                        {Frac(-Poly(v), Poly(u)), Frac(Poly(Rat(-1)), Poly(u))},
                        {Frac(Poly(Rat(-1)), Poly(z)), Frac(Poly(y), Poly(z))},
                        "u=-1/z, v=y/z");
        pl.steps.push_back(ChartCondStep{c, {F0(), F0()}, 1, "index-1 point at (u,v)=(0,0)"});
    } else if (name == "VII") {
        ShapeBuilder b;
        b.quad(rep(BureauType::VII)).fixed(0, 0, 1, Rat(1)).slot(0, 0, 0, "a").slot(1, 0, 0, "b");
        pl = {name, b.s, b.slots, {}, "y'' = y y' + b reduces to a Riccati equation"};
        Sym u = state("u"), v = state("v"), y = state("y"), z = state("z");
        RationalChart c({"y", "z"}, {"u", "v"},
                        {Frac(Poly(Rat(-1)), Poly(u)),
                         (Frac(Poly(v)) + Frac(Rat(1, 2))) / Frac(Poly(Mono::var(u, 2), Rat(1)))},
                        {Frac(Poly(Rat(-1)), Poly(y)),
                         Frac(Poly(z)) / Frac(Poly(Mono::var(y, 2), Rat(1))) - Frac(Rat(1, 2))},
                        "y=-1/u, z=(v+1/2)/u^2");
        pl.steps.push_back(ChartCondStep{c, {F0(), F0()}, 2, "index-2 point at (u,v)=(0,0)"});
    } else if (name == "VIII") {
        ShapeBuilder b;
        b.quad(rep(BureauType::VIII, n)).slot(0, 1, 0, "A").slot(0, 0, 0, "a").slot(1, 0, 0, "b");
        pl = {name + "(" + std::to_string(n) + ")", b.s, b.slots, {},
              "pole removal by the elementary-transformation chain"};
        Sym u = state("u"), v = state("v"), y = state("y"), z = state("z");
        RationalChart c1({"y", "z"}, {"u", "v"},
                         {Frac(Poly(Rat(1)), Poly(u)), (Frac(Poly(v)) + F1()) / Frac(Poly(u))},
                         {Frac(Poly(Rat(1)), Poly(y)), Frac(Poly(z), Poly(y)) - F1()},
                         "y=1/u, z=(v+1)/u");
        pl.steps.push_back(ChartCondStep{c1, {F0(), F0()}, 1, "index-1 point at (u,v)=(0,0)"});
        RationalChart c2({"y", "z"}, {"u", "z"},
                         {Frac(Poly(Rat(-1)), Poly(u)), Frac(Poly(z))},
                         {Frac(Poly(Rat(-1)), Poly(y)), Frac(Poly(z))}, "y=-1/u");
        pl.steps.push_back(
            ChartCondStep{c2, {F0(), F0()}, n, "index-n point on the pole line"});
    } else if (name == "IX.B(2)" || name == "IX.B(3)" || name == "IX.B(5)") {
        int nn = name == "IX.B(2)" ? 2 : name == "IX.B(3)" ? 3 : 5;
        ShapeBuilder b;
        b.quad(rep(BureauType::IX, nn)).fixed(0, 0, 1, Rat(1)).slot(0, 0, 0, "a").slot(1, 0, 0, "b");
        pl.family = name;
        pl.shape = b.s;
        pl.slot_names = b.slots;
        if (nn == 2) {
            pl.sufficiency = "u = z/6 + q solves u'' = 6u^2 + f with f = q'' - 6q^2";
            pl.steps.push_back(
                ChartCondStep{chart_ix(), {F0(), F0()}, 3, "index-3 point at (u,v)=(0,0)"});
            pl.steps.push_back(SubstStep{{{"a", Rat(12) * sy("q")}},
                                         {{"q", Frac(sy("a")) * Frac(Rat(1, 12))}},
                                         "set a = 12q"});
            pl.steps.push_back(ChartCondStep{
                chart_ix(), {F0(), Frac(Rat(3, 2))}, 6, "index-6 point at (u,v)=(0,3/2)"});
        } else if (nn == 3) {
            pl.sufficiency = "y solves y'' = 2y^3 + fy + g with f = -2a, g = b + a'";
            pl.steps.push_back(ChartCondStep{chart_ix(), {F0(), F0()}, 4,
                                             "index-4 point at (u,v)=(0,0)", false});
            pl.steps.push_back(
                ChartCondStep{chart_ix(), {F0(), Frac(Rat(2))}, 4, "index-4 point at (u,v)=(0,2)"});
        } else {
            pl.sufficiency = "u = -2y composes with w = u^2/6 - q + u'/6 into w'' = 6w^2 + f";
            pl.steps.push_back(
                ChartCondStep{chart_ix(), {F0(), Frac(Rat(3))}, 3, "index-3 point at (u,v)=(0,3)"});
            pl.steps.push_back(SubstStep{
                {{"a", Rat(3) * sy("q")}, {"b", Rat(-9) * sy("q", 1)}},
                {{"q", Frac(sy("a")) * Frac(Rat(1, 3))}},
                "set a = 3q, b = -9q'"});
            pl.steps.push_back(
                ChartCondStep{chart_ix(), {F0(), F0()}, 6, "index-6 point at (u,v)=(0,0)"});
        }
    } else if (name == "IX(-3)") {
        ShapeBuilder b;
        b.quad(rep(BureauType::IX, -3)).fixed(0, 0, 1, Rat(1)).slot(1, 0, 1, "D").slot(1, 0, 0, "b");
        pl = {name, b.s, b.slots, {}, "y'' + 6yy' + 4y^3 = b linearizes to w''' = 2bw"};
        Sym u = state("u"), v = state("v"), y = state("y"), z = state("z");
        RationalChart c({"y", "z"}, {"u", "v"},
                        {Frac(Poly(Rat(1)), Poly(u)),
                         (Frac(Poly(v)) - F1()) / Frac(Poly(Mono::var(u, 2), Rat(1)))},
                        {Frac(Poly(Rat(1)), Poly(y)),
                         Frac(Poly(z), Poly(Mono::var(y, 2), Rat(1))) + F1()},
                        "y=1/u, v=z/y^2+1");
        pl.steps.push_back(ChartCondStep{c, {F0(), F0()}, 1, "index-1 point at (u,v)=(0,0)"});
    } else if (name == "XI") {
        ShapeBuilder b;
        b.quad(rep(BureauType::XI))
            .slot(0, 1, 0, "q")
            .slot(0, 0, 0, "a")
            .slot(1, 0, 1, "q", Rat(-1))
            .slot(1, 0, 0, "b");
        pl = {name, b.s, b.slots, {}, "y' = y^2 + qy + K is a Riccati equation"};
        pl.steps.push_back(
            ChartCondStep{chart_neg_recip_y(), {F0(), F0()}, 1, "index-1 point at (u,z)=(0,0)"});
        pl.steps.push_back(SymmetryStep{{Frac(Poly(state("z"))), Frac(Poly(state("y")))},
                                        {Frac(Poly(state("z"))), Frac(Poly(state("y")))},
                                        {{"q", -sy("q")}, {"a", sy("b")}, {"b", sy("a")}},
                                        "exchange of y and z"});
    } else if (name == "XII") {
        ShapeBuilder b;
        b.quad(rep(BureauType::XII))
            .slot(0, 1, 0, "f", Rat(2))
            .slot(0, 0, 0, "a", Rat(-1))
            .slot(1, 0, 1, "f", Rat(-2))
            .slot(1, 0, 0, "b");
        pl = {name, b.s, b.slots, {}, "y solves the second-order rational equation of type P4"};
        pl.steps.push_back(
            ChartCondStep{chart_neg_recip_y(), {F0(), F0()}, 2, "index-2 point at (u,z)=(0,0)"});
        Poly y = st("y"), z = st("z");
        pl.steps.push_back(SymmetryStep{{fr(-z), fr(-y)},
                                        {fr(-z), fr(-y)},
                                        {{"f", -sy("f")}, {"a", sy("b")}, {"b", sy("a")}},
                                        "(y,z) -> (-z,-y)"});
        pl.steps.push_back(SymmetryStep{
            {fr(-y), fr(z + y) + Frac(Rat(2) * sy("f"))},
            {fr(-y), fr(z + y) - Frac(Rat(2) * sy("f"))},
            {{"f", -sy("f")}, {"a", -sy("a")}, {"b", Rat(2) * sy("f", 1) - sy("a") + sy("b")}},
            "(y,z) -> (-y, z+y+2f)"});
    } else if (name == "XIII") {
        ShapeBuilder b;
        b.quad(rep(BureauType::XIII))
            .slot(0, 1, 0, "p", Rat(2))
            .slot(0, 0, 0, "a")
            .slot(1, 0, 1, "p", Rat(-4))
            .slot(1, 0, 0, "b");
        pl = {name, b.s, b.slots, {},
              "u = y/2 - p solves y'' = 2y^3 + fy + g with f = 2p' - 2p^2 + b, g = -p'' + 2pp' + bp"};
        Sym u = state("u"), y = state("y"), z = state("z");
        RationalChart ca({"y", "z"}, {"u", "y"},
                         {Frac(Poly(state("y"))), Frac(Poly(Rat(1)), Poly(u))},
                         {Frac(Poly(Rat(1)), Poly(z)), Frac(Poly(y))}, "u=1/z");
        pl.steps.push_back(ChartCondStep{ca, {F0(), F0()}, 1, "index-1 point at (u,y)=(0,0)"});
        RationalChart cb({"y", "z"}, {"u", "z"},
                         {Frac(Poly(Rat(2)), Poly(u)), Frac(Poly(state("z")))},
                         {Frac(Poly(Rat(2)), Poly(y)), Frac(Poly(z))}, "u=2/y");
        pl.steps.push_back(ChartCondStep{cb, {F0(), F0()}, 3, "index-3 point at (u,z)=(0,0)"});
        Poly py = st("y"), pz = st("z");
        pl.steps.push_back(SymmetryStep{
            {fr(-py), fr(pz - py) + Frac(Rat(4) * sy("p"))},
            {fr(-py), fr(pz - py) - Frac(Rat(4) * sy("p"))},
            {{"p", -sy("p")}, {"b", sy("b") + Rat(4) * sy("p", 1)}},
            "(y,z) -> (-y, z-y+4p)"});
    } else if (name == "XIV") {
        ShapeBuilder b;
        b.quad(rep(BureauType::XIV))
            .slot(0, 1, 0, "p", Rat(3))
            .slot(0, 0, 0, "a")
            .slot(1, 0, 1, "p", Rat(-2))
            .slot(1, 0, 0, "b");
        pl = {name, b.s, b.slots, {},
              "u = z + p solves u'' = -uu' + u^3 - 12qu + 12q' for q = (p' + p^2 - a)/12"};
        pl.steps.push_back(
            ChartCondStep{chart_uv_over_u(), {F0(), F0()}, 2, "index-2 point at (u,v)=(0,0)"});
        Sym u = state("u"), v = state("v"), y = state("y"), z = state("z");
        RationalChart cb({"y", "z"}, {"u", "v"},
                         {Frac(Poly(v)), Frac(Poly(Rat(1)), Poly(u))},
                         {Frac(Poly(Rat(1)), Poly(z)), Frac(Poly(y))}, "u=1/z, v=y");
        pl.steps.push_back(ChartCondStep{cb, {F0(), F0()}, 2, "index-2 point at (u,v)=(0,0)"});
        pl.steps.push_back(ChartCondStep{
            chart_uv_over_u(), {F0(), Frac(Rat(2, 3))}, 6, "index-6 point at (u,v)=(0,2/3)"});
    } else {
        throw std::domain_error("unknown family pipeline: " + name);
    }
    return pl;
}

// ---------------------------------------------------------------------------
// matching an input system against a family shape

namespace detail {

struct MatchedInput {
    std::map<std::string, Frac> values;  // slot symbol -> input coefficient
};

inline MatchedInput match_shape(const Pipeline& pl, const System& s) {
    if (!s.is_polynomial()) throw ShapeMismatch("input rhs not polynomial in the state");
    MatchedInput mi;
    for (int eq = 0; eq < 2; ++eq) {
        auto tpl = collect_state(pl.shape, eq);
        System stmp = s;
        stmp.vars = pl.shape.vars;  // align names for collection
        std::map<Sym, Frac> rename;
        rename[state(s.vars[0])] = Frac(Poly(state(pl.shape.vars[0])));
        rename[state(s.vars[1])] = Frac(Poly(state(pl.shape.vars[1])));
        stmp.rhs[eq] = subst_frac(s.rhs[eq], rename);
        auto inp = collect_state(stmp, eq);
        // union of keys
        std::set<std::pair<int, int>> keys;
        for (auto& [k, c] : tpl) keys.insert(k);
        for (auto& [k, c] : inp) keys.insert(k);
        for (auto& k : keys) {
            Frac T = tpl.count(k) ? tpl[k] : Frac();
            Frac V = inp.count(k) ? inp[k] : Frac();
            if (T.is_constant()) {
                if (!(V == T))
                    throw ShapeMismatch("coefficient of y^" + std::to_string(k.first) + " z^" +
                                        std::to_string(k.second) + " in equation " +
                                        std::to_string(eq) + " must be " + T.str());
                continue;
            }
            // T = factor * slot symbol
            if (!T.is_polynomial() || T.num().terms().size() != 1)
                throw std::logic_error("match_shape: malformed template");
            auto [m, c] = *T.num().terms().begin();
            if (m.factors.size() != 1 || m.factors[0].second != 1)
                throw std::logic_error("match_shape: malformed template slot");
            std::string slot = m.factors[0].first.name;
            Frac val = V / Frac(Rat(c));
            auto it = mi.values.find(slot);
            if (it == mi.values.end())
                mi.values[slot] = val;
            else if (!(it->second == val))
                throw ShapeMismatch("inconsistent values for shared coefficient " + slot);
        }
    }
    return mi;
}

}  // namespace detail

/// Execute a family pipeline symbolically and evaluate the derived
/// conditions on the matched input coefficients.
inline ConditionReport run_pipeline(const Pipeline& pl, const System& input) {
    auto mi = detail::match_shape(pl, input);

    ConditionReport rep;
    rep.family = pl.family;
    rep.sufficiency = pl.sufficiency;

    // current parameter values in internal symbols
    std::map<std::string, Frac> cur;
    for (auto& nm : pl.slot_names) cur[nm] = Frac(Poly(jet(nm)));
    std::map<std::string, Frac> back;  // internal -> original slot symbols

    RuleSet rules, mono_rules;
    std::vector<Poly> conds;

    auto build_system = [&]() {
        System s = pl.shape;
        for (int i = 0; i < 2; ++i) s.rhs[i] = subst_params_frac(s.rhs[i], cur);
        return s;
    };
    auto impose = [&](const Poly& cond) {
        if (auto r = orient_rule(cond)) {
            rules.add(*r);
            if (cond.terms().size() == 1) mono_rules.add(*r);
            for (auto& [nm, v] : cur) v = rules.reduce(v);
        }
    };
    auto record = [&](const std::string& note, const Poly& cond, bool do_impose) {
        Poly c = normalize_condition(cond);
        rep.steps.push_back({note, c});
        if (c.is_zero()) return;
        for (auto& e : conds)
            if (e == c) return;
        conds.push_back(c);
        if (do_impose) impose(c);
    };

    for (auto& step : pl.steps) {
        if (auto* cs = std::get_if<ChartCondStep>(&step)) {
            System sys = build_system();
            System tr = apply_chart(sys, cs->chart);
            CanonicalEquation ce = extract_canonical(tr, cs->point);
            if (cs->expect_index && ce.n != *cs->expect_index)
                throw std::logic_error("pipeline " + pl.family + ": expected index " +
                                       std::to_string(*cs->expect_index) + ", found " +
                                       std::to_string(ce.n));
            Poly cond = necessary_condition(ce, rules);
            record(cs->note + " [" + cs->chart.name + "]", cond, cs->impose);
        } else if (auto* sm = std::get_if<SymmetryStep>(&step)) {
            // transport the current system through the state map and verify
            // the parameter action reproduces the family shape
            System sys = build_system();
            Sym y = state(pl.shape.vars[0]), z = state(pl.shape.vars[1]);
            std::array<Frac, 2> fwd = {subst_params_frac(sm->map_fwd[0], cur),
                                       subst_params_frac(sm->map_fwd[1], cur)};
            std::array<Frac, 2> inv = {subst_params_frac(sm->map_inv[0], cur),
                                       subst_params_frac(sm->map_inv[1], cur)};
            std::map<Sym, Frac> invsub{{y, inv[0]}, {z, inv[1]}};
            std::array<Frac, 2> newrhs;
            for (int i = 0; i < 2; ++i) {
                Frac d = fwd[i].partial(y) * sys.rhs[0] + fwd[i].partial(z) * sys.rhs[1] +
                         fwd[i].derive();
                newrhs[i] = subst_frac(d, invsub);
            }
            std::map<std::string, Frac> imgvals;
            for (auto& [nm, v] : cur) imgvals[nm] = v;
            for (auto& [nm, poly] : sm->action) imgvals[nm] = subst_params_frac(poly, cur);
            System expected = pl.shape;
            for (int i = 0; i < 2; ++i)
                expected.rhs[i] = subst_params_frac(pl.shape.rhs[i], imgvals);
            if (!(newrhs[0] == expected.rhs[0] && newrhs[1] == expected.rhs[1]))
                throw NotASymmetry(sm->note + " does not preserve the family " + pl.family);
            // transport the conditions found so far
            std::vector<Poly> imgs;
            for (auto& c : conds) imgs.push_back(c.substitute_params(sm->action));
            for (auto& c : imgs) {
                Poly reduced = mono_rules.reduce(c);
                record(sm->note, reduced, true);
            }
        } else if (auto* sb = std::get_if<SubstStep>(&step)) {
            for (auto& [nm, v] : cur) {
                if (!v.is_polynomial())
                    throw std::logic_error("pipeline: non-polynomial parameter value");
                cur[nm] = Frac(v.num().substitute_params(sb->subst));
            }
            for (auto& [nm, f] : sb->back) {
                back[nm] = f;
                rep.glossary[nm] = f.str();
            }
        } else if (auto* st = std::get_if<StatedStep>(&step)) {
            record(st->note, rules.reduce(st->condition), true);
        }
    }

    rep.final_conditions = conds;

    // evaluate the conditions on the matched input values
    bool all_zero = true, any_nonzero_constant = false;
    for (auto& c : conds) {
        Frac v = subst_params_frac(c, back);
        v = subst_params_frac(v, mi.values);
        rep.evaluated_conditions.push_back(v);
        if (!v.is_zero()) {
            all_zero = false;
            if (v.is_constant()) any_nonzero_constant = true;
            // explicit polynomials in t that are not identically zero also
            // violate the condition
            bool only_t = true;
            for (const Sym& s : v.symbols())
                if (s.kind != SymKind::Time) only_t = false;
            if (only_t) any_nonzero_constant = true;
        }
    }
    if (any_nonzero_constant)
        rep.verdict = "conditions-violated";
    else if (all_zero)
        rep.verdict = "free-of-movable-critical-points";
    else
        rep.verdict = "free-given-conditions";
    return rep;
}

/// Pipeline lookup by family label; n is needed only for the parametric
/// families (VIII, IX.A0, IX.B0).
inline ConditionReport derive_family_conditions(const std::string& family, const System& s,
                                                std::optional<int> n = std::nullopt) {
    std::string name = family;
    int nn = n.value_or(0);
    if (name == "IX.A(3)") name = "IX(-3)";  // reduced form of the n = -3 case
    // accept labels like "VIII(3)", "IX.B0(4)"
    for (const char* base : {"VIII", "IX.A0", "IX.B0"}) {
        std::string pre = std::string(base) + "(";
        if (family.rfind(pre, 0) == 0 && family.back() == ')') {
            name = base;
            nn = std::stoi(family.substr(pre.size()));
            break;
        }
    }
    if ((name == "VIII" || name == "IX.A0" || name == "IX.B0") && nn == 0) {
        // infer n from the quadratic part
        QuadPair q = quadratic_part(s);
        if (name == "VIII")
            nn = static_cast<int>((-q.Q[1]).to_int());
        else if (name == "IX.B0")
            nn = static_cast<int>((q.Q[1] + Rat(1)).to_int());
        else
            nn = static_cast<int>((-q.Q[1] - Rat(1)).to_int());
    }
    Pipeline pl = fam::make(name, nn);
    return run_pipeline(pl, s);
}

/// Standalone symmetry application on a report (exposed for testing and the
/// symmetry-audit entry points).
inline ConditionReport apply_symmetry(const Pipeline& pl, const System& input,
                                      const ConditionReport& report, const SymmetryStep& sym) {
    Pipeline ext = pl;
    ext.steps.clear();
    for (auto& c : report.final_conditions) ext.steps.push_back(StatedStep{c, "carried over"});
    ext.steps.push_back(sym);
    return run_pipeline(ext, input);
}

}  // namespace pql
