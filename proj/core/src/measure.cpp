#include "spindle/measure.hpp"

#include <cmath>

#include "spindle/errors.hpp"
#include "spindle/util.hpp"

namespace spindle {

double area(const MetricProfile& p, const QuadOptions& quad) {
    const std::function<double(double)> f = [&](double s) {
        return 2.0 * kPi * p.r(s);
    };
    return integrate_piecewise(f, 0.0, p.M(), p.quad_breakpoints(), quad);
}

double contact_volume_direct(const MetricProfile& p, const QuadOptions& quad) {
    return 2.0 * kPi * area(p, quad);
}

VolumeReport contact_volume_decomposed(const MetricProfile& p,
                                       const GeneratingFunction& G,
                                       const QuadOptions& quad) {
    if (G.route != GenfunRoute::FromIntegral || !G.f_eval)
        throw Error(
            "contact_volume_decomposed: needs the integral-route generating "
            "function with its evaluator");

    const double L = G.L;
    const int order = G.signature.order;
    const double r0 = L / (2.0 * kPi);

    VolumeReport rep;
    rep.area = area(p, quad);
    rep.vol_direct = 2.0 * kPi * rep.area;

    const double intF = integrate(G.f_eval, 0.0, 1.0, quad);
    const double main_term = 4.0 * L * intF - order * L * L;

    // Boundary-region slices, inner beta integrals in closed form:
    //   int dbeta          = 2 arccos(r0/r)
    //   int cos(beta) dbeta = 2 sqrt(1 - r0^2/r^2)
    const std::function<double(double)> cos_slice = [&](double s) {
        const double r = p.r(s);
        const double q = std::max(0.0, 1.0 - (r0 / r) * (r0 / r));
        return 2.0 * std::sqrt(q);
    };
    const std::function<double(double)> r_slice = [&](double s) {
        const double r = p.r(s);
        const double c = std::min(1.0, r0 / r);
        return 2.0 * r * std::acos(c);
    };
    const double C_gamma = gamma_slice_integral(p, cos_slice, quad);
    const double R_gamma = gamma_slice_integral(p, r_slice, quad);

    rep.gamma_part = 4.0 * kPi * R_gamma - 2.0 * L * C_gamma;
    rep.saturated_part = main_term - 2.0 * L * C_gamma;
    rep.vol_decomposed = main_term + rep.gamma_part;
    rep.rel_mismatch =
        std::abs(rep.vol_direct - rep.vol_decomposed) / rep.vol_direct;
    return rep;
}

}  // namespace spindle
