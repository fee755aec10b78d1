#pragma once
#include <functional>
#include <span>
#include <vector>

#include "spindle/annulus.hpp"
#include "spindle/profile.hpp"
#include "spindle/quadrature.hpp"

namespace spindle {

enum class GenfunRoute { FromReturnMap, FromIntegral };

/// Generating function of the first return map on a symmetric eta grid.
/// tau = F - eta F' and the xi-advance is F' + alpha L/2; critical points of
/// F correspond to closed geodesics of length (1+alpha) F.
struct GeneratingFunction {
    double L = 0;
    OrbifoldSignature signature;
    std::vector<double> eta;   ///< ascending, symmetric; may include +-1
    std::vector<double> F;     ///< length units
    std::vector<double> Fp;    ///< dF/deta
    std::vector<bool> valid;   ///< false where the source entry was censored
    GenfunRoute route = GenfunRoute::FromIntegral;
    double endpoint_value = 0; ///< F(+-1) from the boundary-region integral

    /// Exact pointwise evaluators used for root refinement (set by the
    /// constructing route; integral route = quadrature, return route = ODE).
    std::function<double(double)> f_eval;
    std::function<double(double)> fp_eval;

    /// Integral route: max |Fp - central difference of F| (diagnostic).
    double fp_fd_max_dev = 0;

    double min_valid_F() const;
    double max_valid_F() const;
};

/// F and F' by the area formula: F(eta) = int over the superlevel region
/// {r > kappa} of 2 sqrt(1 - kappa^2/r^2) ds + (m+n) L |eta| / 2 with
/// kappa = r(s0)|eta|; the endpoint F(+-1) integrates over {r >= r(s0)}.
/// The grid may include +-1.
GeneratingFunction genfun_from_integral(const MetricProfile& p,
                                        std::span<const double> eta_grid,
                                        const QuadOptions& quad = {});

/// F' from the winding identity F' = L (W - (m+n)/2), F = tau + eta F'.
/// Throws InconsistentData if oddness of F' fails beyond 1e-5 L.
GeneratingFunction genfun_from_returns(std::span<const ReturnData> returns,
                                       OrbifoldSignature sig, double L);

/// Same, wiring in ODE-backed pointwise evaluators for refinement.
GeneratingFunction genfun_from_returns(const MetricProfile& p,
                                       const Annulus& ann,
                                       std::span<const ReturnData> returns,
                                       const ReturnOptions& ropts = {});

struct CriticalPoint {
    enum class Kind { Min, Max, Inflection };
    double eta = 0;
    double mu = 0;  ///< F(eta)
    Kind kind = Kind::Min;
};

/// Critical points of F, or the all-critical flag when F is numerically
/// constant (total variation below 1e-6 L); mu is then the mean of F and
/// every eta counts as critical downstream.
struct CriticalSet {
    bool all_critical = false;
    double mu = 0;
    std::vector<CriticalPoint> points;
};

CriticalSet critical_points(const GeneratingFunction& G);

/// 1-D integral of f over the slice {s : r(s) >= r(s0)} of the region where
/// the Clairaut level meets or exceeds the reference radius, split at kinks.
double gamma_slice_integral(const MetricProfile& p,
                            const std::function<double(double)>& f,
                            const QuadOptions& quad = {});

}  // namespace spindle
