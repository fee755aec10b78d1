#pragma once
#include <map>
#include <span>
#include <vector>

#include "spindle/annulus.hpp"
#include "spindle/genfun.hpp"
#include "spindle/measure.hpp"
#include "spindle/topology.hpp"

namespace spindle {

enum class GeodesicKind { EquatorIterate, Meridian, Oscillating };

struct ClosedGeodesic {
    GeodesicKind kind = GeodesicKind::Oscillating;
    int iterate = 1;        ///< equator iterate index
    double equator_s = 0;   ///< equator location (EquatorIterate only)
    double eta = 0;         ///< annulus height of a representative (Oscillating)
    int q = 1;              ///< annulus returns per closure
    double length = 0;
    long total_winding = 0;
    HomotopyClass homotopy;
    bool family = false;    ///< member of an S^1-family of geodesics
    double closure_residual = -1;  ///< phase distance after re-integration; -1 = not checked
};

enum class Verdict { BelowBound, AtBound, Violation };

struct BoundCheck {
    bool applicable = false;
    double ratio = 0;
    double bound = 0;
    double margin = 0;  ///< (bound - ratio)/bound
    Verdict verdict = Verdict::BelowBound;
};

struct SystoleReport {
    OrbifoldSignature sig;
    double area = 0;
    double L = 0;
    VolumeReport vol;
    std::vector<ClosedGeodesic> geodesics;  ///< sorted by length
    double l_min = 0;        ///< shortest closed geodesic, any class
    double l_min_contr = 0;  ///< shortest with contractible lift
    std::map<int, double> l_min_k;  ///< per divisor k of m+n
    std::vector<double> tau_seq;    ///< first (m+n)/(2-alpha) values
    double rho_sys = 0;
    double rho_contr = 0;
    double rho_contr_2 = 0;     ///< NaN when m+n is odd
    double rho_periodspec = 0;  ///< tau_{(m+n)/(2-alpha)}^2 / area
    double rho_contact_lift = 0;///< rho_contr / (2 pi (m+n))
    BoundCheck bound_contr;     ///< rho_contr vs 2(m+n)pi
    BoundCheck bound_half;      ///< rho_contr_2 vs ((m+n)/2)pi, even m+n only
    BoundCheck bound_period;    ///< rho_periodspec vs 2(m+n)pi/(2-alpha)^2
    bool besse_flat = false;    ///< generating function numerically constant
};

struct EnumerateOptions {
    double root_tol = 1e-10;
    double meridian_eta_exclusion = 1e-6;
    double winding_gate = 1e-6;
    ReturnOptions ret{};     ///< grid-speed integration for bracketing
    ReturnOptions polish{1e-13, 1e-15, 50, 1e-6, 1e-8};  ///< final candidates
};

/// All closed geodesics up to the length cutoff visible from the annulus
/// machinery: equator iterates, the meridian family, and for every q <= q_max
/// the heights where q-fold returns close up (roots of F' on the admissible
/// lattice of xi-advances). Duplicates are reduced to the minimal q and one
/// orientation. Throws GridTooCoarse when adjacent grid F' values jump by
/// more than L/(2 q_max).
std::vector<ClosedGeodesic> enumerate_closed(const MetricProfile& p,
                                             const Annulus& ann,
                                             const GeneratingFunction& G,
                                             std::span<const ReturnData> returns,
                                             double cutoff, int q_max,
                                             const EnumerateOptions& opts = {});

/// Minimal length among geodesics (and their iterates, up to m+n) whose lift
/// lies in the subgroup of order k. Throws CutoffTooSmall when the result
/// cannot be certified against non-enumerated geodesics.
double l_min_in_class(std::span<const ClosedGeodesic> geodesics,
                      const OrbifoldSignature& sig, int k, double cutoff);

/// tau_1 <= ... <= tau_count: isolated orbits (equator iterates) contribute
/// one entry per iterate at their length; any S^1-family contributes
/// infinitely many entries at its length, saturating the sequence.
std::vector<double> tau_sequence(std::span<const ClosedGeodesic> geodesics,
                                 int count);

/// Re-integrate a closed geodesic for its reported length and return the
/// phase distance to the start (theta wrapped mod 2 pi and scaled by r0).
/// Meridians cannot be re-integrated through the cone points; returns -1.
double closure_residual(const MetricProfile& p, const Annulus& ann,
                        const ClosedGeodesic& g, const ReturnOptions& opts = {});

struct AnalysisNumerics {
    int eta_grid_n = 401;        ///< odd
    double eta_margin = 1e-3;
    double ode_rel_tol = 1e-11;
    double ode_abs_tol = 1e-13;
    double quad_rel_tol = 1e-10;
    double quad_abs_tol = 1e-12;
    double time_cap_factor = 50;
    int q_max = 0;               ///< 0 = default 2(2-alpha)
    double length_cutoff = 0;    ///< 0 = default 3(m+n)L
    double closure_tol = 1e-6;
    double closure_rel_tol = 1e-13;  ///< re-integration runs tighter than the grids
    double closure_abs_tol = 1e-15;
    double at_bound_tol = 1e-4;
    unsigned jobs = 1;
    bool verify_closures = true;
};

struct AnalysisResult {
    Annulus annulus;
    std::vector<ReturnData> returns;
    GeneratingFunction G_ret;
    GeneratingFunction G_int;
    CriticalSet crit;
    SystoleReport report;
    double route_max_dev = 0;         ///< max |F_int - F_ret| on the valid grid
    double winding_identity_dev = 0;  ///< max winding-identity residual
    double max_closure_residual = 0;
    double fp_fd_max_dev = 0;
};

/// Assemble the ratio table and bound verdicts from computed ingredients.
SystoleReport ratios(const MetricProfile& p, const VolumeReport& vol,
                     std::vector<ClosedGeodesic> geodesics, double cutoff,
                     bool besse_flat, double at_bound_tol);

/// Full pipeline: profile -> returns -> generating function (both routes) ->
/// measure -> enumeration -> ratios and verdicts.
AnalysisResult analyze(const MetricProfile& p, const AnalysisNumerics& num = {});

}  // namespace spindle
