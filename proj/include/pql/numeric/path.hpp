#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace pql {

/// Piecewise-smooth parametric curve in the t-plane; each segment is
/// parametrized over [0, 1].
struct ComplexPath {
    struct Segment {
        enum Kind { Line, Arc } kind = Line;
        std::complex<double> a, b;      // Line: from a to b
        std::complex<double> center;    // Arc
        double radius = 0, theta0 = 0, theta1 = 0;

        std::complex<double> at(double s) const {
            if (kind == Line) return a + (b - a) * s;
            double th = theta0 + (theta1 - theta0) * s;
            return center + radius * std::complex<double>(std::cos(th), std::sin(th));
        }
        std::complex<double> tangent(double s) const {
            if (kind == Line) return b - a;
            double th = theta0 + (theta1 - theta0) * s;
            return radius * (theta1 - theta0) *
                   std::complex<double>(-std::sin(th), std::cos(th));
        }
    };

    std::vector<Segment> segments;

    std::complex<double> start() const { return segments.front().at(0); }
    std::complex<double> end() const { return segments.back().at(1); }

    static ComplexPath line(std::complex<double> a, std::complex<double> b) {
        ComplexPath p;
        p.segments.push_back({Segment::Line, a, b});
        return p;
    }

    /// Closed loop from a base point: radial approach to the circle of the
    /// given center/radius, one positive turn, and the return leg. When the
    /// base lies on the circle the radial legs are omitted.
    static ComplexPath loop(std::complex<double> center, double radius,
                            std::complex<double> base) {
        ComplexPath p;
        std::complex<double> d = base - center;
        double ad = std::abs(d);
        double th = std::atan2(d.imag(), d.real());
        std::complex<double> entry = center + radius * d / ad;
        bool on_circle = std::abs(ad - radius) < 1e-14 * (1 + radius);
        if (!on_circle) p.segments.push_back({Segment::Line, base, entry});
        Segment arc;
        arc.kind = Segment::Arc;
        arc.center = center;
        arc.radius = radius;
        arc.theta0 = th;
        arc.theta1 = th + 2 * std::numbers::pi;
        p.segments.push_back(arc);
        if (!on_circle) p.segments.push_back({Segment::Line, entry, base});
        return p;
    }
};

}  // namespace pql
