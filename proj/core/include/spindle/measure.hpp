#pragma once
#include "spindle/genfun.hpp"
#include "spindle/profile.hpp"
#include "spindle/quadrature.hpp"

namespace spindle {

/// Riemannian area and the contact volume of the unit tangent bundle by two
/// independent formulas, with their relative mismatch.
struct VolumeReport {
    double area = 0;            ///< int_0^M 2 pi r ds
    double vol_direct = 0;      ///< 2 pi area
    double vol_decomposed = 0;  ///< 4L int_0^1 F + boundary-region terms
    double saturated_part = 0;  ///< volume of the flow saturation of the annulus
    double gamma_part = 0;      ///< int over {K >= r0} of (4 pi r - 2L cos b)
    double rel_mismatch = 0;    ///< |direct - decomposed| / direct
};

double area(const MetricProfile& p, const QuadOptions& quad = {});

double contact_volume_direct(const MetricProfile& p,
                             const QuadOptions& quad = {});

/// Requires the integral-route generating function (its pointwise evaluator
/// covers [0,1] and the endpoint region).
VolumeReport contact_volume_decomposed(const MetricProfile& p,
                                       const GeneratingFunction& G,
                                       const QuadOptions& quad = {});

}  // namespace spindle
