#pragma once

#include "pql/numeric/integrate.hpp"
#include "pql/reduction.hpp"

namespace pql {

/// Record of analytic continuation around a closed loop.
struct MonodromyReport {
    ComplexPath loop;
    std::array<std::complex<double>, 2> start_state, end_state;
    std::array<double, 2> discrepancy{};             // |end - start| per component
    std::array<std::complex<double>, 2> jump{};      // end - start
    enum Verdict { SingleValued, Inconclusive, Branching } verdict = SingleValued;
    IntegrationStats stats;
};

/// Continue the solution around the circle of the given center/radius
/// starting from base_t; a discrepancy below tol (relative to the state
/// magnitude) certifies single-valued continuation along this loop, a
/// discrepancy above 10x declares branching, anything between is
/// inconclusive.
template <class R = double>
MonodromyReport monodromy_test(const NumericInstance& inst, std::complex<double> base_t,
                               std::array<std::complex<double>, 2> init,
                               std::complex<double> center, double radius, double tol,
                               const IntegrateOptions& opt = {}) {
    MonodromyReport rep;
    rep.loop = ComplexPath::loop(center, radius, base_t);
    rep.start_state = init;
    std::array<std::complex<R>, 2> x{std::complex<R>((R)init[0].real(), (R)init[0].imag()),
                                     std::complex<R>((R)init[1].real(), (R)init[1].imag())};
    auto res = integrate_path<R>(inst, x, rep.loop, tol, opt);
    rep.stats = res.stats;
    for (int i = 0; i < 2; ++i) {
        rep.end_state[i] = {(double)res.end_state[i].real(), (double)res.end_state[i].imag()};
        rep.jump[i] = rep.end_state[i] - rep.start_state[i];
        rep.discrepancy[i] = std::abs(rep.jump[i]);
    }
    double scale0 = 1 + std::abs(init[0]), scale1 = 1 + std::abs(init[1]);
    double d = std::max(rep.discrepancy[0] / scale0, rep.discrepancy[1] / scale1);
    if (d < tol)
        rep.verdict = MonodromyReport::SingleValued;
    else if (d <= 10 * tol)
        rep.verdict = MonodromyReport::Inconclusive;
    else
        rep.verdict = MonodromyReport::Branching;
    return rep;
}

struct ResidualReport {
    double max_residual = 0;
    long long samples = 0, skipped_singular = 0;
};

/// Transport the trajectory through the forward map of an equivalence and
/// evaluate the target system's defining residual pointwise.
template <class R = double>
ResidualReport equivalence_residual(const NumericInstance& inst, const EquivalenceMap& map,
                                    std::array<std::complex<double>, 2> init,
                                    const ComplexPath& path, double tol) {
    // symbolic preparation: the time derivative of the forward map along the
    // source field
    std::array<Frac, 2> dfor = {derivative_along(map.source, map.forward[0]),
                                derivative_along(map.source, map.forward[1])};

    ResidualReport rep;
    IntegrateOptions opt;
    auto vars = map.source.vars;
    auto tvars0 = map.target.vars;
    opt.sample = [&](std::complex<double> t, std::array<std::complex<double>, 2> x, int chart) {
        if (chart != 0) return;  // only sample in the affine chart
        using C = std::complex<double>;
        std::array<C, 2> xs{x[0], x[1]};
        // guard: forward-map denominators
        for (int i = 0; i < 2; ++i) {
            C den = inst.eval_poly<double>(map.forward[i].den(), vars, xs, t);
            if (std::abs(den) < 1e-12 * (1 + std::abs(xs[0]) + std::abs(xs[1]))) {
                ++rep.skipped_singular;
                return;
            }
        }
        std::array<C, 2> w{inst.eval_frac<double>(map.forward[0], vars, xs, t),
                           inst.eval_frac<double>(map.forward[1], vars, xs, t)};
        std::array<C, 2> dw{inst.eval_frac<double>(dfor[0], vars, xs, t),
                            inst.eval_frac<double>(dfor[1], vars, xs, t)};
        for (int i = 0; i < 2; ++i) {
            C tden = inst.eval_poly<double>(map.target.rhs[i].den(), tvars0, w, t);
            if (std::abs(tden) < 1e-12) {
                ++rep.skipped_singular;
                return;
            }
            C trhs = inst.eval_frac<double>(map.target.rhs[i], tvars0, w, t);
            rep.max_residual = std::max(rep.max_residual, std::abs(dw[i] - trhs));
        }
        ++rep.samples;
    };
    std::array<std::complex<R>, 2> x{std::complex<R>((R)init[0].real(), (R)init[0].imag()),
                                     std::complex<R>((R)init[1].real(), (R)init[1].imag())};
    integrate_path<R>(inst, x, path, tol, opt);
    return rep;
}

}  // namespace pql
