#include "spindle/annulus.hpp"

#include <cmath>
#include <sstream>

#include "spindle/errors.hpp"
#include "spindle/util.hpp"

namespace spindle {

Annulus make_annulus(const MetricProfile& p) {
    const Equator& e = p.equators().minimal();
    return {e.s, e.radius, 2.0 * kPi * e.radius};
}

Annulus make_annulus_at(const MetricProfile& p, double s_equator) {
    for (const auto& e : p.equators().all) {
        if (std::abs(e.s - s_equator) < 1e-6 * p.M())
            return {e.s, e.radius, 2.0 * kPi * e.radius};
    }
    throw Error("make_annulus_at: no equator near requested s");
}

ReturnData first_return(const MetricProfile& p, const Annulus& ann, double eta,
                        const ReturnOptions& opts) {
    const int order = p.signature().order;
    if (!(eta > -1.0 && eta < 1.0))
        throw Error("first_return: eta must lie in (-1, 1)");
    if (std::abs(eta) < opts.pole_guard_K_factor)
        throw Error("first_return: eta too close to the meridian value 0; "
                    "use meridian_return");

    const PhasePoint x0{0.0, std::acos(-eta), ann.s0};
    IntegrateOptions io;
    io.rel_tol = opts.rel_tol;
    io.abs_tol = opts.abs_tol;
    io.record = false;
    io.section_s = ann.s0;
    io.stop_after_crossings = 1;
    io.pole_guard_factor = opts.pole_guard_factor;

    const double cap = opts.time_cap_factor * order * ann.L;
    const Trajectory traj = integrate(p, x0, cap, io);

    bool crossed = false;
    double t_cross = 0;
    for (const auto& ev : traj.events) {
        if (ev.kind == EventKind::SectionCross) {
            crossed = true;
            t_cross = ev.t;
        }
        if (ev.kind == EventKind::PolePassage) {
            std::ostringstream msg;
            msg << "orbit at eta=" << eta
                << " entered the pole guard band; treat as meridian";
            throw Error(msg.str());
        }
    }
    if (!crossed) {
        std::ostringstream msg;
        msg << "no first return within time cap " << cap << " at eta=" << eta
            << "; the reference equator is not of minimal radius";
        throw NoReturn(msg.str());
    }

    const PhasePoint xf = traj.states.back();
    ReturnData rd;
    rd.eta = eta;
    rd.tau = t_cross;
    const double w_phys = xf.theta / (2.0 * kPi);
    rd.winding = w_phys + (eta > 0 ? order : 0);
    rd.delta_xi = ann.L * (rd.winding - 0.5 * order) +
                  p.signature().alpha * ann.L / 2.0;
    rd.ode_drift = traj.clairaut_drift;
    return rd;
}

ReturnData first_return(const MetricProfile& p, double eta,
                        const ReturnOptions& opts) {
    return first_return(p, make_annulus(p), eta, opts);
}

ReturnData meridian_return(const MetricProfile& p) {
    const Annulus ann = make_annulus(p);
    const auto& sig = p.signature();
    ReturnData rd;
    rd.eta = 0.0;
    rd.tau = 2.0 * p.M();
    rd.winding = 0.5 * sig.order;
    rd.delta_xi = sig.alpha * ann.L / 2.0;
    rd.ode_drift = 0.0;
    return rd;
}

std::vector<ReturnData> return_grid(const MetricProfile& p, int n_grid,
                                    const GridOptions& opts) {
    if (n_grid < 16) throw Error("return_grid: n_grid must be >= 16");
    if (n_grid % 2 == 0) ++n_grid;  // symmetric grid containing eta = 0

    const Annulus ann = make_annulus(p);
    const auto grid = chebyshev_symmetric_grid(n_grid, opts.eta_margin);
    std::vector<ReturnData> out(grid.size());

    parallel_for(grid.size(), opts.jobs, [&](std::size_t i) {
        const double eta = grid[i];
        if (eta == 0.0) {
            out[i] = meridian_return(p);
            return;
        }
        try {
            out[i] = first_return(p, ann, eta, opts.ret);
        } catch (const NoReturn&) {
            out[i] = ReturnData{};
            out[i].eta = eta;
            out[i].censored = true;
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "return_grid entry eta=" << eta << ": " << e.what();
            throw Error(msg.str());
        }
    });
    return out;
}

AnnulusPoint apply_return(const AnnulusPoint& x, const ReturnData& rd,
                          const Annulus& ann) {
    double xi = std::fmod(x.xi + rd.delta_xi, ann.L);
    if (xi < 0) xi += ann.L;
    return {xi, x.eta};
}

}  // namespace spindle
