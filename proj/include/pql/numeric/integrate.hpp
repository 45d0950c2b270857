#pragma once

#include <functional>
#include <ostream>

#include "pql/numeric/instance.hpp"
#include "pql/numeric/path.hpp"

namespace pql {

struct StepCollapse : std::runtime_error {
    std::complex<double> where;
    explicit StepCollapse(std::complex<double> t)
        : std::runtime_error("integration step collapsed (suspected non-pole singularity)"),
          where(t) {}
};
struct NonFiniteState : std::runtime_error {
    NonFiniteState() : std::runtime_error("state became non-finite") {}
};

struct SingularityNote {
    std::complex<double> t;
    enum Kind { Pole, SuspectedBranch } kind = Pole;
};

struct IntegrationStats {
    long long accepted = 0, rejected = 0;
    int chart_switches = 0;
    std::vector<SingularityNote> singularities;
};

template <class R>
struct IntegrationResult {
    std::array<std::complex<R>, 2> end_state;  // in original coordinates
    int end_chart = 0;
    IntegrationStats stats;
};

struct IntegrateOptions {
    double switch_threshold = 1e6;
    double switch_hysteresis = 1e2;
    double min_step = 1e-14;
    long long max_steps = 2'000'000;
    std::ostream* trace = nullptr;
    /// called at every accepted step with (t, state in current chart, chart)
    std::function<void(std::complex<double>, std::array<std::complex<double>, 2>, int)> sample;
};

namespace detail_rk {

/// Dormand-Prince 5(4) coefficients.
template <class R>
struct DP {
    static constexpr R c[7] = {0, R(1) / 5, R(3) / 10, R(4) / 5, R(8) / 9, 1, 1};
    static constexpr R a[7][6] = {
        {},
        {R(1) / 5},
        {R(3) / 40, R(9) / 40},
        {R(44) / 45, R(-56) / 15, R(32) / 9},
        {R(19372) / 6561, R(-25360) / 2187, R(64448) / 6561, R(-212) / 729},
        {R(9017) / 3168, R(-355) / 33, R(46732) / 5247, R(49) / 176, R(-5103) / 18656},
        {R(35) / 384, 0, R(500) / 1113, R(125) / 192, R(-2187) / 6784, R(11) / 84}};
    static constexpr R b5[7] = {R(35) / 384,     0,          R(500) / 1113, R(125) / 192,
                                R(-2187) / 6784, R(11) / 84, 0};
    static constexpr R b4[7] = {R(5179) / 57600,    0,
                                R(7571) / 16695,    R(393) / 640,
                                R(-92097) / 339200, R(187) / 2100,
                                R(1) / 40};
};

}  // namespace detail_rk

/// Adaptive continuation of the system along a path in the t-plane, with
/// automatic switching between the compactification charts when the state
/// grows beyond the threshold.
template <class R>
IntegrationResult<R> integrate_path(const NumericInstance& inst,
                                    std::array<std::complex<R>, 2> init,
                                    const ComplexPath& path, double tol,
                                    const IntegrateOptions& opt = {}) {
    using C = std::complex<R>;
    using T = detail_rk::DP<R>;
    if (tol < 1e-13 || tol > 1e-6)
        throw std::domain_error("integrate_path: tol outside [1e-13, 1e-6]");
    auto finite = [](const C& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
    if (!finite(init[0]) || !finite(init[1])) throw NonFiniteState();

    IntegrationResult<R> res;
    IntegrationStats& stats = res.stats;
    int chart = 0;
    std::array<C, 2> x = init;

    auto norm_of = [](const std::array<C, 2>& v) {
        return std::max(std::abs(v[0]), std::abs(v[1]));
    };

    auto maybe_switch = [&](C t) {
        R cur = norm_of(x);
        if (cur <= (R)opt.switch_threshold) return;
        int best = chart;
        std::array<C, 2> bestx = x;
        R bestn = cur;
        for (int j = 0; j < inst.chart_count(); ++j) {
            if (j == chart) continue;
            auto cand = inst.convert<R>(chart, j, x, t);
            if (!finite(cand[0]) || !finite(cand[1])) continue;
            R n = norm_of(cand);
            if (n < bestn) {
                bestn = n;
                best = j;
                bestx = cand;
            }
        }
        if (best != chart && bestn < cur / (R)opt.switch_hysteresis) {
            chart = best;
            x = bestx;
            ++stats.chart_switches;
            stats.singularities.push_back(
                {std::complex<double>((double)t.real(), (double)t.imag()),
                 SingularityNote::Pole});
        }
    };

    for (auto& seg : path.segments) {
        R s = 0;
        R h = R(1) / 64;
        R errprev = 1;
        while (s < 1) {
            if (h > 1 - s) h = 1 - s;
            if (h < (R)opt.min_step) {
                stats.singularities.push_back({seg.at((double)s), SingularityNote::SuspectedBranch});
                throw StepCollapse(seg.at((double)s));
            }
            // RK stages for dx/ds = gamma'(s) * F(x, gamma(s))
            std::array<std::array<C, 2>, 7> k;
            bool stage_ok = true;
            for (int i = 0; i < 7 && stage_ok; ++i) {
                std::array<C, 2> xi = x;
                for (int j = 0; j < i; ++j) {
                    xi[0] += h * T::a[i][j] * k[j][0];
                    xi[1] += h * T::a[i][j] * k[j][1];
                }
                R si = s + T::c[i] * h;
                std::complex<double> td = seg.at((double)si), gd = seg.tangent((double)si);
                C t{(R)td.real(), (R)td.imag()}, g{(R)gd.real(), (R)gd.imag()};
                auto f = inst.field<R>(chart, xi, t);
                k[i] = {g * f[0], g * f[1]};
                if (!finite(k[i][0]) || !finite(k[i][1])) stage_ok = false;
            }
            if (!stage_ok) {
                h /= 2;
                ++stats.rejected;
                continue;
            }
            std::array<C, 2> x5 = x, x4 = x;
            for (int i = 0; i < 7; ++i) {
                x5[0] += h * T::b5[i] * k[i][0];
                x5[1] += h * T::b5[i] * k[i][1];
                x4[0] += h * T::b4[i] * k[i][0];
                x4[1] += h * T::b4[i] * k[i][1];
            }
            if (!finite(x5[0]) || !finite(x5[1])) {
                h /= 2;
                ++stats.rejected;
                continue;
            }
            R err = 0;
            for (int i = 0; i < 2; ++i) {
                R sc = (R)tol * (1 + std::abs(x[i]));
                err = std::max(err, std::abs(x5[i] - x4[i]) / sc);
            }
            if (err <= 1) {
                s += h;
                x = x5;
                ++stats.accepted;
                std::complex<double> td = seg.at((double)s);
                if (opt.trace) {
                    *opt.trace << td.real() << " " << td.imag() << " " << (double)x[0].real()
                               << " " << (double)x[0].imag() << " " << (double)x[1].real() << " "
                               << (double)x[1].imag() << " " << chart << "\n";
                }
                if (opt.sample)
                    opt.sample(td,
                               {std::complex<double>((double)x[0].real(), (double)x[0].imag()),
                                std::complex<double>((double)x[1].real(), (double)x[1].imag())},
                               chart);
                C t{(R)td.real(), (R)td.imag()};
                maybe_switch(t);
            } else {
                ++stats.rejected;
            }
            // PI step controller
            R fac = R(0.9) * std::pow(err > 0 ? err : R(1e-10), R(-0.7) / 5) *
                    std::pow(errprev, R(0.4) / 5);
            fac = std::min(R(5), std::max(R(0.2), fac));
            h *= fac;
            if (err <= 1) errprev = std::max(err, R(1e-4));
            if (stats.accepted + stats.rejected > opt.max_steps)
                throw std::runtime_error("integrate_path: step budget exhausted");
        }
    }

    // map back to original coordinates
    std::complex<double> te = path.end();
    C t{(R)te.real(), (R)te.imag()};
    if (chart != 0) {
        x = inst.convert<R>(chart, 0, x, t);
        if (!finite(x[0]) || !finite(x[1])) throw NonFiniteState();
    }
    res.end_state = x;
    res.end_chart = chart;
    return res;
}

}  // namespace pql
