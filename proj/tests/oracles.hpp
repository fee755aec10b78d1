#pragma once
// Test-only oracles, independent of the library's computation paths.
#include <array>
#include <cmath>
#include <functional>

#include "spindle/flow.hpp"
#include "spindle/profile.hpp"

namespace oracles {

// Great circle on the unit sphere launched from the equator point
// (theta=0, s=pi/2) at angle beta0 against the parallel. Position in R^3,
// independent of the ODE: p(t) = cos(t) p0 + sin(t) v0.
struct GreatCircle {
    double beta0;

    std::array<double, 3> position(double t) const {
        const double c = std::cos(t), s = std::sin(t);
        return {c, s * std::cos(beta0), -s * std::sin(beta0)};
    }

    double s_of(double t) const {
        return std::acos(std::clamp(position(t)[2], -1.0, 1.0));
    }

    // Chordal distance between the ODE state and the oracle position.
    static double embed_distance(const spindle::PhasePoint& x,
                                 const std::array<double, 3>& p) {
        const double r = std::sin(x.s);
        const double dx = r * std::cos(x.theta) - p[0];
        const double dy = r * std::sin(x.theta) - p[1];
        const double dz = std::cos(x.s) - p[2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }
};

// Composite Simpson rule; deliberately naive and separate from the GSL path.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Critical points of r by brute-force sign scan of r' on a fine grid,
// independent of the library's bracketing/refinement path.
inline std::vector<double> equator_scan(const spindle::MetricProfile& p,
                                        int n = 200000) {
    std::vector<double> roots;
    const double M = p.M();
    double prev_s = 1e-6 * M, prev = p.dr(prev_s);
    for (int i = 1; i <= n; ++i) {
        const double s = 1e-6 * M + (M - 2e-6 * M) * i / n;
        const double d = p.dr(s);
        if (prev * d < 0) roots.push_back(0.5 * (prev_s + s));
        prev = d;
        prev_s = s;
    }
    return roots;
}

}  // namespace oracles
