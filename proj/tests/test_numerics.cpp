#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pql/catalog.hpp"
#include "pql/numeric/monodromy.hpp"

using namespace pql;
using C = std::complex<double>;

namespace {

Poly st(const std::string& v) { return Poly(state(v)); }
Poly sy(const std::string& n, int k = 0) { return Poly(jet(n, k)); }

UPoly<GaussRat> gp(std::vector<long long> coeffs) {
    std::vector<GaussRat> v;
    for (auto c : coeffs) v.push_back(GaussRat(Rat(c)));
    return UPoly<GaussRat>(v);
}

System make(const std::string& v1, const std::string& v2, Frac r1, Frac r2) {
    System s;
    s.vars = {v1, v2};
    s.rhs = {std::move(r1), std::move(r2)};
    return s;
}

const double PI = 3.14159265358979323846;

}  // namespace

TEST_CASE("instance construction validates bindings") {
    Poly y = st("y"), z = st("z");
    System s = make("y", "z", Frac(y * (y - Rat(2) * z) + sy("a")), Frac(-z * z));
    CHECK_THROWS_AS(NumericInstance(s, {}), UnboundSymbol);
    NumericInstance inst(s, {{"a", gp({0, 1})}});
    CHECK(inst.chart_count() == 3);
    // jets evaluate to derivatives of the binding: a = t, a' = 1, a'' = 0
    CHECK(std::abs(inst.jet_value<double>("a", 0, C(2.5, 0)) - C(2.5, 0)) < 1e-15);
    CHECK(std::abs(inst.jet_value<double>("a", 1, C(2.5, 0)) - C(1, 0)) < 1e-15);
    CHECK(std::abs(inst.jet_value<double>("a", 2, C(2.5, 0))) < 1e-15);
}

TEST_CASE("integration self-consistency and convergence order") {
    // Riccati-reducible instance: y' = y(y-2z) + t, z' = -z^2
    Poly y = st("y"), z = st("z");
    System s = make("y", "z", Frac(y * (y - Rat(2) * z) + sy("a")), Frac(-z * z));
    NumericInstance inst(s, {{"a", gp({0, 1})}});

    ComplexPath seg = ComplexPath::line(C(0, 0), C(0.8, 0.4));
    std::array<C, 2> init{C(0.1, 0), C(0.2, 0)};

    auto ref = integrate_path<double>(inst, init, seg, 1e-13);
    std::vector<double> errs, steps;
    for (double tol : {1e-7, 1e-9, 1e-11}) {
        auto r = integrate_path<double>(inst, init, seg, tol);
        double e = std::max(std::abs(r.end_state[0] - ref.end_state[0]),
                            std::abs(r.end_state[1] - ref.end_state[1]));
        CHECK(e < 20 * tol);
        errs.push_back(std::max(e, 1e-16));
        steps.push_back((double)r.stats.accepted);
    }
    // order >= 4: slope of log(err) against log(steps) at most -4
    double slope = (std::log(errs.back()) - std::log(errs.front())) /
                   (std::log(steps.back()) - std::log(steps.front()));
    CHECK(slope < -4.0);
    // halving the tolerance at most doubles the work
    auto a = integrate_path<double>(inst, init, seg, 2e-10);
    auto b = integrate_path<double>(inst, init, seg, 1e-10);
    CHECK(b.stats.accepted + b.stats.rejected <= 2 * (a.stats.accepted + a.stats.rejected) + 16);
}

TEST_CASE("pole crossing switches charts and matches the closed form") {
    // w' = w^2 + a - b, z' = -(n+1) z^2 - n w z + b with a = b = 0, n = 1:
    // w(t) = 1/(1/2 - t) crosses its pole at t = 1/2
    Poly w = st("w"), z = st("z");
    System s = make("w", "z", Frac(w * w), Frac(-Rat(2) * z * z - w * z));
    NumericInstance inst(s, {});
    ComplexPath seg = ComplexPath::line(C(0, 0), C(1, 0));
    auto r = integrate_path<double>(inst, {C(2, 0), C(0.5, 0)}, seg, 1e-11);
    CHECK(r.stats.chart_switches >= 1);
    CHECK(std::abs(r.end_state[0] - C(-2, 0)) < 1e-8);
    // a pole was logged near t = 1/2
    bool near = false;
    for (auto& n : r.stats.singularities)
        if (n.kind == SingularityNote::Pole && std::abs(n.t - C(0.5, 0)) < 0.05) near = true;
    CHECK(near);
}

TEST_CASE("monodromy of the quadrature family with a logarithmic branch") {
    // y' = -y^2, z' = yz + p y with p = t: y = 1/t, z = t log t + ct has a
    // branch point at t = 0 with jump 2 pi i t at the base point
    Poly y = st("y"), z = st("z");
    System s = make("y", "z", Frac(-y * y), Frac(y * z + sy("p") * y));
    NumericInstance inst(s, {{"p", gp({0, 1})}});
    auto rep = monodromy_test(inst, C(1, 0), {C(1, 0), C(0, 0)}, C(0, 0), 0.5, 1e-10);
    CHECK(rep.verdict == MonodromyReport::Branching);
    CHECK(std::abs(rep.jump[1] - C(0, 2 * PI)) < 1e-6 * 2 * PI);
    CHECK(std::abs(rep.jump[0]) < 1e-8);

    // compliant binding p = 1 (the derivative-order condition holds):
    // single-valued continuation
    NumericInstance inst2(s, {{"p", gp({1})}});
    auto rep2 = monodromy_test(inst2, C(1, 0), {C(1, 0), C(0, 0)}, C(0, 0), 0.5, 1e-10);
    CHECK(rep2.verdict == MonodromyReport::SingleValued);
    CHECK(rep2.discrepancy[0] < 1e-8);
    CHECK(rep2.discrepancy[1] < 1e-8);
}

TEST_CASE("monodromy around a movable pole of the second-order reduction family") {
    // y' = z, z' = 6y^2 + t: movable poles only; a loop around a detected
    // pole continues single-valuedly
    Poly y = st("y"), z = st("z");
    System s = make("y", "z", Frac(z), Frac(Rat(6) * y * y + sy("f")));
    NumericInstance inst(s, {{"f", gp({0, 1})}});

    // locate the first movable pole along the positive real axis; the pole
    // sits on the path, so the continuation eventually collapses right next
    // to it, after the chart switch has flagged its position
    C pole;
    try {
        auto probe = integrate_path<double>(inst, {C(0, 0), C(0, 0)},
                                            ComplexPath::line(C(0, 0), C(4, 0)), 1e-11);
        REQUIRE(!probe.stats.singularities.empty());
        pole = probe.stats.singularities.front().t;
    } catch (const StepCollapse& sc) {
        pole = sc.where;
    }
    REQUIRE(std::abs(pole) > 0.5);

    // state at a base point before the pole
    C base = pole - C(0.5, 0);
    auto at_base = integrate_path<double>(inst, {C(0, 0), C(0, 0)},
                                          ComplexPath::line(C(0, 0), base), 1e-11);
    auto rep = monodromy_test(inst, base, {at_base.end_state[0], at_base.end_state[1]}, pole,
                              0.25, 1e-10);
    CHECK(rep.stats.chart_switches == 0);  // the loop stays away from the pole
    CHECK(rep.verdict == MonodromyReport::SingleValued);
}

TEST_CASE("first-integral drift along trajectories") {
    // y' = z, z' = 6y^2 + f0: H = 4y^3 + 2 f0 y - z^2 conserved
    Poly y = st("y"), z = st("z");
    System s = make("y", "z", Frac(z), Frac(Rat(6) * y * y + sy("f")));
    NumericInstance inst(s, {{"f", gp({3})}});
    Frac H{Rat(4) * y.pow(3) + Rat(2) * sy("f") * y - z * z};

    double h0 = 0, drift = 0;
    bool first = true;
    IntegrateOptions opt;
    opt.sample = [&](C t, std::array<C, 2> x, int chart) {
        if (chart != 0) return;
        double hv = std::abs(inst.eval_frac<double>(H, {"y", "z"}, {x[0], x[1]}, t));
        if (first) {
            h0 = hv;
            first = false;
        } else {
            drift = std::max(drift, std::abs(hv - h0));
        }
    };
    integrate_path<double>(inst, {C(0.3, 0.1), C(-0.2, 0.2)},
                           ComplexPath::line(C(0, 0), C(1, 0)), 1e-10, opt);
    CHECK(!first);
    CHECK(drift < 1e-8);
}

TEST_CASE("equivalence residual along a trajectory") {
    // the n = 5 subfamily with q = 0 transported to the second-order target
    EquivalenceMap m = equivalence_map("IX.B(5)");
    NumericInstance inst(m.source, {{"q", gp({})}});
    auto rep = equivalence_residual(inst, m, {C(0.3, 0), C(-0.2, 0)},
                                    ComplexPath::line(C(0, 0), C(1, 0)), 1e-10);
    CHECK(rep.samples > 10);
    CHECK(rep.max_residual < 1e-8);
}

TEST_CASE("step collapse at a genuine branch point") {
    // y' = y^3: 1/y^2 = 1 - 2t, a square-root branch of the pole at
    // t = 1/2 that no rational chart resolves
    Poly y = st("y"), z = st("z");
    System s = make("y", "z", Frac(y.pow(3)), Frac());
    NumericInstance inst(s, {});
    CHECK_THROWS_AS(integrate_path<double>(inst, {C(1, 0), C(0, 0)},
                                           ComplexPath::line(C(0, 0), C(1, 0)), 1e-10),
                    StepCollapse);
    // non-finite initial state rejected
    CHECK_THROWS_AS(integrate_path<double>(
                        inst, {C(std::nan(""), 0), C(0, 0)},
                        ComplexPath::line(C(0, 0), C(1, 0)), 1e-10),
                    NonFiniteState);
}

TEST_CASE("extended precision mode") {
    Poly y = st("y"), z = st("z");
    System s = make("y", "z", Frac(z), Frac(Rat(6) * y * y + sy("f")));
    NumericInstance inst(s, {{"f", gp({0, 1})}});
    std::array<std::complex<long double>, 2> init{std::complex<long double>(0.1L, 0),
                                                  std::complex<long double>(0.0L, 0)};
    auto r = integrate_path<long double>(inst, init, ComplexPath::line(C(0, 0), C(1, 0)), 1e-12);
    auto rd = integrate_path<double>(inst, {C(0.1, 0), C(0, 0)},
                                     ComplexPath::line(C(0, 0), C(1, 0)), 1e-12);
    CHECK(std::abs((double)r.end_state[0].real() - rd.end_state[0].real()) < 1e-9);
}
