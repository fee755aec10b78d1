#pragma once
#include <vector>

#include "spindle/flow.hpp"
#include "spindle/profile.hpp"

namespace spindle {

/// Point of the Birkhoff annulus at the reference equator, in coordinates
/// xi = r(s0)*theta (mod L) and eta = -cos(beta) in (-1,1).
struct AnnulusPoint {
    double xi = 0;
    double eta = 0;
};

/// Section data at an equator: location s0, radius r0, length L = 2 pi r0.
struct Annulus {
    double s0 = 0;
    double r0 = 0;
    double L = 0;
};

/// Annulus at the minimal-radius equator (the only one whose section is
/// saturated by all |K| < r0 orbits).
Annulus make_annulus(const MetricProfile& p);

/// Annulus at an arbitrary equator of p (diagnostics; the first-return map is
/// not guaranteed to be defined everywhere on it).
Annulus make_annulus_at(const MetricProfile& p, double s_equator);

/// First-return data at height eta. `winding` carries the continuity
/// normalization: W(eta) = unwrapped Dtheta/2pi + (m+n)*[eta > 0], which
/// matches the meridian value (m+n)/2 at eta = 0 from both sides and keeps
/// W - delta_xi/L an integer.
struct ReturnData {
    double eta = 0;
    double tau = 0;       ///< first return time = arc length of one oscillation
    double delta_xi = 0;  ///< unreduced xi-advance, includes the alpha*L/2 shift
    double winding = 0;   ///< normalized W(eta)
    double ode_drift = 0; ///< Clairaut drift over the return
    bool censored = false;///< exceeded the time cap (grid entries only)
};

struct ReturnOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    double time_cap_factor = 50;  ///< cap = factor * (m+n) * L
    double pole_guard_factor = 1e-6;
    double pole_guard_K_factor = 1e-8;
};

/// Integrate from (theta=0, beta=arccos(-eta), s=s0) to the first northbound
/// crossing of s = s0. Throws NoReturn if the time cap is exceeded (the
/// reference equator is then not of minimal radius) and propagates
/// StepFailure. By rotational symmetry the result is xi-independent.
ReturnData first_return(const MetricProfile& p, const Annulus& ann, double eta,
                        const ReturnOptions& opts = {});
ReturnData first_return(const MetricProfile& p, double eta,
                        const ReturnOptions& opts = {});

/// eta = 0 data assembled analytically from meridional arcs:
/// tau = 2M, winding = (m+n)/2, delta_xi = alpha*L/2.
ReturnData meridian_return(const MetricProfile& p);

struct GridOptions {
    double eta_margin = 1e-3;  ///< grid spans (-1+margin, 1-margin)
    unsigned jobs = 1;
    ReturnOptions ret{};
};

/// ReturnData on a symmetric Chebyshev-clustered grid of n_grid points
/// (n_grid odd, >= 16 rounded up to odd), including the eta = 0 meridian
/// entry. Entries whose integration exceeds the time cap are marked censored
/// instead of failing the grid. Parallel over entries; assembly is by index.
std::vector<ReturnData> return_grid(const MetricProfile& p, int n_grid,
                                    const GridOptions& opts = {});

/// xi-advance applied to an annulus point (the return map's first component).
AnnulusPoint apply_return(const AnnulusPoint& x, const ReturnData& rd,
                          const Annulus& ann);

}  // namespace spindle
