#include "spindle/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "spindle/dopri5.hpp"
#include "spindle/quadrature.hpp"
#include "spindle/util.hpp"

namespace spindle {

double clairaut(const MetricProfile& p, const PhasePoint& x) {
    return p.r(x.s) * std::cos(x.beta);
}

namespace {

struct GeodesicRhs {
    const MetricProfile* p;
    void operator()(double, const std::array<double, 3>& y,
                    std::array<double, 3>& dy) const {
        const double r = p->r(y[2]);
        const double c = std::cos(y[1]);
        dy[0] = c / r;
        dy[1] = p->dr(y[2]) * c / r;
        dy[2] = std::sin(y[1]);
    }
};

PhasePoint to_point(const std::array<double, 3>& y) {
    return {y[0], y[1], y[2]};
}

}  // namespace

Trajectory integrate(const MetricProfile& p, const PhasePoint& x0, double t_max,
                     const IntegrateOptions& opts) {
    if (!(x0.s > 0 && x0.s < p.M()))
        throw Error("integrate: initial s must lie in (0, M)");
    if (!(t_max > 0)) throw Error("integrate: t_max must be positive");

    const double guard = opts.pole_guard_factor * p.M();
    const double guard_lo = guard, guard_hi = p.M() - guard;

    Trajectory traj;
    const double K0 = clairaut(p, x0);
    Dopri5<3, GeodesicRhs> stepper(GeodesicRhs{&p}, opts.rel_tol, opts.abs_tol);
    stepper.start(0.0, {x0.theta, x0.beta, x0.s});

    auto record_sample = [&](double t, const std::array<double, 3>& y) {
        if (!traj.times.empty() && t <= traj.times.back()) return;
        traj.times.push_back(t);
        traj.states.push_back(to_point(y));
        const double K = p.r(y[2]) * std::cos(y[1]);
        traj.clairaut_drift = std::max(traj.clairaut_drift, std::abs(K - K0));
    };
    record_sample(0.0, {x0.theta, x0.beta, x0.s});

    int crossings = 0;
    // Dense-output subsampling per step for event scanning; grazing orbits
    // can dip across the section and back within one step.
    constexpr int kScan = 8;

    while (stepper.t() < t_max) {
        if (stepper.steps() > opts.max_steps)
            throw StepFailure("step budget exceeded");
        const double t_prev = stepper.t();
        const double t_new = stepper.step(t_max);
        if (t_new == t_prev) break;
        const auto& dense = stepper.dense();
        const double h = dense.h;

        // Pole guard: truncate when s leaves (guard_lo, guard_hi).
        {
            double theta_exit = -1;
            double s_prev = dense.eval(0.0)[2];
            for (int j = 1; j <= kScan; ++j) {
                const double th = static_cast<double>(j) / kScan;
                const double s_here = dense.eval(th)[2];
                if ((s_here <= guard_lo && s_prev > guard_lo) ||
                    (s_here >= guard_hi && s_prev < guard_hi)) {
                    // Bisect the first entry into the guard band.
                    double lo = static_cast<double>(j - 1) / kScan, hi = th;
                    for (int it = 0; it < 80; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const double sm = dense.eval(mid)[2];
                        if (sm <= guard_lo || sm >= guard_hi)
                            hi = mid;
                        else
                            lo = mid;
                    }
                    theta_exit = hi;
                    break;
                }
                s_prev = s_here;
            }
            if (theta_exit >= 0) {
                const double t_exit = dense.t0 + theta_exit * h;
                record_sample(t_exit, dense.eval(theta_exit));
                traj.events.push_back({t_exit, EventKind::PolePassage});
                return traj;
            }
        }

        // Section crossings: s = section_s with ds/dt > 0.
        if (opts.section_s) {
            const double s0 = *opts.section_s;
            double th_prev = 0.0;
            double g_prev = dense.eval(0.0)[2] - s0;
            for (int j = 1; j <= kScan; ++j) {
                const double th = static_cast<double>(j) / kScan;
                const double g = dense.eval(th)[2] - s0;
                if (g_prev < 0.0 && g >= 0.0) {
                    double lo = th_prev, hi = th;
                    for (int it = 0; it < 100; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        if (dense.eval(mid)[2] - s0 >= 0.0)
                            hi = mid;
                        else
                            lo = mid;
                        if ((hi - lo) * std::abs(h) <
                            1e-13 * std::max(1.0, t_new))
                            break;
                    }
                    const double t_cross = dense.t0 + hi * h;
                    const auto y_cross = dense.eval(hi);
                    // Northbound only.
                    if (std::sin(y_cross[1]) > 0.0) {
                        record_sample(t_cross, y_cross);
                        traj.events.push_back({t_cross, EventKind::SectionCross});
                        ++crossings;
                        if (opts.stop_after_crossings > 0 &&
                            crossings >= opts.stop_after_crossings)
                            return traj;
                    }
                }
                th_prev = th;
                g_prev = g;
            }
        }

        if (opts.record || stepper.t() >= t_max)
            record_sample(stepper.t(), stepper.y());
        else {
            // Track the drift even when samples are not retained.
            const auto& y = stepper.y();
            const double K = p.r(y[2]) * std::cos(y[1]);
            traj.clairaut_drift =
                std::max(traj.clairaut_drift, std::abs(K - K0));
        }
    }

    if (!opts.record) record_sample(stepper.t(), stepper.y());
    return traj;
}

OrbitClass classify(const MetricProfile& p, const PhasePoint& x0,
                    const ClassifyOptions& opts) {
    if (!(x0.s > 0 && x0.s < p.M()))
        throw Error("classify: s must lie in (0, M)");
    const auto& eq = p.equators();
    const double K = clairaut(p, x0);
    const double r0 = eq.minimal().radius;

    if (std::abs(K) < opts.pole_guard_K_factor * r0) return Meridional{};

    for (const auto& e : eq.all) {
        if (std::abs(x0.s - e.s) < opts.root_tol * 100 &&
            std::abs(std::remainder(x0.beta, kPi)) < 1e-9)
            return Equatorial{e.s};
    }

    const double aK = std::abs(K);
    // Distance of |K| to the nearest critical value of r decides whether the
    // oscillating/asymptotic dichotomy is numerically resolvable.
    double crit_dist = std::numeric_limits<double>::infinity();
    const Equator* nearest = nullptr;
    for (const auto& e : eq.all) {
        const double d = std::abs(e.radius - aK);
        if (d < crit_dist) {
            crit_dist = d;
            nearest = &e;
        }
    }
    double rmax = 0;
    for (const auto& e : eq.all) rmax = std::max(rmax, e.radius);

    if (crit_dist < 1e-10 * rmax) {
        // |K| sits on a critical level: the orbit limits onto that equator
        // in both time directions (the two limit equators coincide here).
        return Asymptotic{nearest->s, nearest->s};
    }
    if (crit_dist < opts.amb_tol * rmax)
        throw ToleranceAmbiguity(
            "|K| within tolerance of a critical value of r; cannot "
            "distinguish oscillating from asymptotic");

    // Locate the oscillation band: nearest roots of r(s) = |K| on both sides.
    const std::function<double(double)> f = [&](double s) {
        return p.r(s) - aK;
    };
    const double margin = 1e-9 * p.M();
    auto refine_down = [&](double from) -> double {
        // march from x0.s toward 0 looking for a sign change of r - |K|
        const int n = opts.scan_grid_n;
        double hi = from, fhi = f(hi);
        for (int i = 1; i <= n; ++i) {
            const double lo = from - (from - margin) * i / n;
            const double flo = f(lo);
            if (fhi >= 0 && flo <= 0) return find_root(f, lo, hi, opts.root_tol);
            hi = lo;
            fhi = flo;
        }
        throw Error("classify: no lower band boundary found");
    };
    auto refine_up = [&](double from) -> double {
        const int n = opts.scan_grid_n;
        double lo = from, flo = f(lo);
        for (int i = 1; i <= n; ++i) {
            const double hi = from + (p.M() - margin - from) * i / n;
            const double fhi = f(hi);
            if (flo >= 0 && fhi <= 0) return find_root(f, lo, hi, opts.root_tol);
            lo = hi;
            flo = fhi;
        }
        throw Error("classify: no upper band boundary found");
    };

    const double s1 = refine_down(x0.s);
    const double s2 = refine_up(x0.s);
    if (!(p.dr(s1) > 0 && p.dr(s2) < 0))
        throw Error("classify: band boundary is not transversal");
    return Oscillating{s1, s2};
}

}  // namespace spindle
