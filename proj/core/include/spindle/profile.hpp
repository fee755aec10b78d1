#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spindle/errors.hpp"

namespace spindle {

/// Orders of the two cone points of a spindle orbifold S^2(m,n), together
/// with the derived constants used throughout: the parity constant alpha and
/// the order m+n of the fundamental group of the unit tangent bundle.
struct OrbifoldSignature {
    int m = 1;      ///< order of the cone point at s = 0
    int n = 1;      ///< order of the cone point at s = M
    int alpha = 0;  ///< (m+n) mod 2
    int order = 2;  ///< m + n

    static OrbifoldSignature make(int m, int n);

    /// Iterations after which a simple loop not enclosing the cone points
    /// becomes contractible in the unit tangent bundle: (m+n)/gcd(m,n).
    int nonenclosing_contractible_order() const;
};

/// Odd reparametrization function h for the closed-geodesic family of
/// metrics, h(v) = ((m-n)/2) v + sum_j c_j (v^{2j+1} - v). The form makes
/// h odd and pins h(1) = (m-n)/2, h(-1) = -(m-n)/2 structurally.
struct BesseSpec {
    OrbifoldSignature signature;
    std::vector<double> coeffs;  ///< c_1, c_2, ... (may be empty)

    double h(double v) const;
    double dh(double v) const;

    /// Throws RangeViolation if |h| >= (m+n)/2 anywhere on a dense grid;
    /// the metric coefficient (m+n)/2 + h(cos R) would degenerate.
    void check_range(int grid_n = 4097) const;
};

enum class Provenance { Round, Besse, Perturbed, Sampled };

/// Evaluator backend for the radial profile r(s).
class RadialCurve {
public:
    virtual ~RadialCurve() = default;
    virtual double r(double s) const = 0;
    virtual double dr(double s) const = 0;
    virtual double d2r(double s) const = 0;
    /// Interior points where smoothness degrades (piece joints); quadratures
    /// split at these.
    virtual std::vector<double> breakpoints() const { return {}; }
};

struct Equator {
    double s = 0;
    double radius = 0;
};

struct EquatorSet {
    std::vector<Equator> all;      ///< sorted by s
    std::size_t minimal_index = 0; ///< index of minimal radius (smallest s on ties)
    bool tie = false;              ///< another equator matches the minimal radius

    const Equator& minimal() const { return all[minimal_index]; }
};

struct ProfileOptions {
    double root_tol = 1e-10;       ///< absolute tolerance for roots of r'
    int scan_grid_n = 10000;       ///< grid for invariant checks and root scans
    double boundary_tol = 1e-9;    ///< |r| tolerance at s in {0, M}
    double cone_slope_tol = 1e-6;  ///< tolerance on r'(0+)-1/m, r'(M-)+1/n
};

/// Arclength radial profile of a rotationally symmetric spindle orbifold:
/// the metric is r(s)^2 dtheta^2 + ds^2 on (0,M), r(0) = r(M) = 0, with cone
/// angles fixed by r'(0+) = 1/m and r'(M-) = -1/n. Immutable after
/// construction; cheap to copy and safe to share across threads.
class MetricProfile {
public:
    MetricProfile(OrbifoldSignature sig, double meridian_length,
                  std::shared_ptr<const RadialCurve> curve, Provenance prov,
                  const ProfileOptions& opts = {});

    const OrbifoldSignature& signature() const { return sig_; }
    double M() const { return M_; }
    Provenance provenance() const { return prov_; }

    double r(double s) const { return curve_->r(s); }
    double dr(double s) const { return curve_->dr(s); }
    double d2r(double s) const { return curve_->d2r(s); }

    /// Interior critical points of r, sorted by s, with the minimal-radius
    /// one marked (computed once at construction).
    const EquatorSet& equators() const { return equators_; }

    /// Length of the reference (minimal-radius) equator, 2*pi*r(s0).
    double equator_length() const;

    const RadialCurve& curve() const { return *curve_; }
    std::shared_ptr<const RadialCurve> curve_ptr() const { return curve_; }

    /// {0, interior breakpoints..., M} for piecewise quadrature.
    std::vector<double> quad_breakpoints() const;

private:
    OrbifoldSignature sig_;
    double M_;
    std::shared_ptr<const RadialCurve> curve_;
    Provenance prov_;
    EquatorSet equators_;

    void validate(const ProfileOptions& opts) const;
};

/// Unit round sphere: r(s) = sin(s), M = pi, signature (1,1).
MetricProfile make_round();

/// Profile of the all-geodesics-closed family for the given spec, in
/// arclength form: s(R) = int_0^R ((m+n)/2 + h(cos rho)) drho, r = sin R.
/// M = (m+n) pi / 2 and the unique equator has length 2 pi.
MetricProfile make_besse(const BesseSpec& spec);

/// Modify `base` on [0,eps] and [M-eps,M] so the pole slopes become 1/m and
/// -1/n for the target signature, leaving [eps, M-eps] bit-identical.
/// Throws MonotonicityViolation if a modified band loses strict monotonicity.
MetricProfile perturb_poles(const MetricProfile& base, OrbifoldSignature target,
                            double eps);

/// Add a compactly supported bump a * chi((s-center)/width) to r on
/// (center-width, center+width); the rest of the profile is bit-identical to
/// `base`. The result may legitimately gain equators (dumbbells).
MetricProfile perturb_band(const MetricProfile& base, double center,
                           double width, double amplitude);

/// Monotone C^1 interpolation (Fritsch-Carlson) of (s, r) knots with end
/// slopes pinned to the cone-angle values of `sig`.
MetricProfile make_sampled(OrbifoldSignature sig,
                           const std::vector<std::pair<double, double>>& knots);

/// Free-function form of the equator query (see MetricProfile::equators).
/// Throws DegenerateCritical if r' vanishes on an interval up to tolerance.
EquatorSet equators(const MetricProfile& p);

/// Smooth cutoff used by the pole modification: psi(0)=1, psi(1)=0 with two
/// vanishing derivatives at both ends (complement of the quintic smoothstep).
double pole_blend(double x);

/// Compactly supported bump, chi(0) = 1, chi(|x|>=1) = 0, C^infinity.
double band_bump(double x);
double band_bump_d1(double x);
double band_bump_d2(double x);

}  // namespace spindle
