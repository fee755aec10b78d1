#include "spindle/profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <tuple>

#include "spindle/quadrature.hpp"
#include "spindle/util.hpp"

namespace spindle {

// ---------------------------------------------------------------------------
// OrbifoldSignature
// ---------------------------------------------------------------------------

OrbifoldSignature OrbifoldSignature::make(int m, int n) {
    if (m < 1 || n < 1)
        throw Error("OrbifoldSignature: cone orders must be positive");
    OrbifoldSignature s;
    s.m = m;
    s.n = n;
    s.order = m + n;
    s.alpha = (m + n) % 2;
    return s;
}

int OrbifoldSignature::nonenclosing_contractible_order() const {
    return order / std::gcd(m, n);
}

// ---------------------------------------------------------------------------
// BesseSpec
// ---------------------------------------------------------------------------

namespace {

// Monomial coefficients of h: h(v) = sum_k A[k] v^{2k+1}.
std::vector<double> h_monomials(const BesseSpec& spec) {
    std::vector<double> A(spec.coeffs.size() + 1, 0.0);
    A[0] = 0.5 * (spec.signature.m - spec.signature.n);
    for (std::size_t j = 0; j < spec.coeffs.size(); ++j) {
        A[0] -= spec.coeffs[j];
        A[j + 1] = spec.coeffs[j];
    }
    return A;
}

double eval_odd_poly(const std::vector<double>& A, double v) {
    const double v2 = v * v;
    double acc = 0.0;
    for (std::size_t k = A.size(); k-- > 0;) acc = acc * v2 + A[k];
    return acc * v;
}

double eval_odd_poly_deriv(const std::vector<double>& A, double v) {
    const double v2 = v * v;
    double acc = 0.0;
    for (std::size_t k = A.size(); k-- > 0;)
        acc = acc * v2 + (2.0 * k + 1.0) * A[k];
    return acc;
}

}  // namespace

double BesseSpec::h(double v) const { return eval_odd_poly(h_monomials(*this), v); }
double BesseSpec::dh(double v) const {
    return eval_odd_poly_deriv(h_monomials(*this), v);
}

void BesseSpec::check_range(int grid_n) const {
    const auto A = h_monomials(*this);
    const double limit = 0.5 * signature.order;
    for (int i = 0; i < grid_n; ++i) {
        const double v = -1.0 + 2.0 * i / (grid_n - 1);
        if (std::abs(eval_odd_poly(A, v)) >= limit) {
            std::ostringstream msg;
            msg << "|h(" << v << ")| >= (m+n)/2 = " << limit
                << "; metric degenerates";
            throw RangeViolation(msg.str());
        }
    }
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

namespace {

class RoundCurve final : public RadialCurve {
public:
    double r(double s) const override { return std::sin(s); }
    double dr(double s) const override { return std::cos(s); }
    double d2r(double s) const override { return -std::sin(s); }
};

class BesseCurve final : public RadialCurve {
public:
    explicit BesseCurve(const BesseSpec& spec)
        : A_(h_monomials(spec)), half_order_(0.5 * spec.signature.order) {
        // Antiderivative of cos^{2k+1}: Q_k(sin R) with
        // Q_k(u) = sum_i binom(k,i) (-1)^i u^{2i+1} / (2i+1).
        q_.resize(A_.size());
        for (std::size_t k = 0; k < A_.size(); ++k) {
            q_[k].resize(k + 1);
            double binom = 1.0;
            for (std::size_t i = 0; i <= k; ++i) {
                const double sign = (i % 2 == 0) ? 1.0 : -1.0;
                q_[k][i] = sign * binom / (2.0 * i + 1.0);
                binom = binom * (k - i) / (i + 1.0);
            }
        }
        M_ = half_order_ * kPi;  // odd part of h integrates to zero
    }

    double meridian_length() const { return M_; }

    double w_of_R(double R) const {
        return half_order_ + eval_odd_poly(A_, std::cos(R));
    }

    double s_of_R(double R) const {
        const double u = std::sin(R);
        const double u2 = u * u;
        double acc = half_order_ * R;
        for (std::size_t k = 0; k < A_.size(); ++k) {
            double poly = 0.0;
            for (std::size_t i = q_[k].size(); i-- > 0;)
                poly = poly * u2 + q_[k][i];
            acc += A_[k] * poly * u;
        }
        return acc;
    }

    double R_of_s(double s) const {
        if (s <= 0) return 0.0;
        if (s >= M_) return kPi;
        double lo = 0.0, hi = kPi;
        double R = kPi * s / M_;
        for (int iter = 0; iter < 100; ++iter) {
            const double f = s_of_R(R) - s;
            if (f > 0)
                hi = R;
            else
                lo = R;
            const double step = f / w_of_R(R);
            double Rn = R - step;
            if (!(Rn > lo && Rn < hi)) Rn = 0.5 * (lo + hi);
            if (std::abs(Rn - R) < 1e-15 * kPi) return Rn;
            R = Rn;
        }
        return R;
    }

    double r(double s) const override { return std::sin(R_of_s(s)); }

    double dr(double s) const override {
        const double R = R_of_s(s);
        return std::cos(R) / w_of_R(R);
    }

    double d2r(double s) const override {
        const double R = R_of_s(s);
        const double w = w_of_R(R);
        const double c = std::cos(R);
        return std::sin(R) * (c * eval_odd_poly_deriv(A_, c) - w) / (w * w * w);
    }

private:
    std::vector<double> A_;
    std::vector<std::vector<double>> q_;
    double half_order_;
    double M_;
};

struct BandBump {
    double center, width, amp;
};

class PerturbedCurve final : public RadialCurve {
public:
    PerturbedCurve(std::shared_ptr<const RadialCurve> base, double M,
                   double eps, double d_north, double d_south,
                   std::vector<BandBump> bumps)
        : base_(std::move(base)),
          M_(M),
          eps_(eps),
          dn_(d_north),
          ds_(d_south),
          bumps_(std::move(bumps)) {}

    double r(double s) const override {
        double v = base_->r(s);
        if (eps_ > 0) {
            if (s < eps_)
                v += dn_ * s * pole_blend(s / eps_);
            else if (s > M_ - eps_)
                v += ds_ * (M_ - s) * pole_blend((M_ - s) / eps_);
        }
        for (const auto& b : bumps_) {
            const double x = (s - b.center) / b.width;
            if (x > -1 && x < 1) v += b.amp * band_bump(x);
        }
        return v;
    }

    double dr(double s) const override {
        double v = base_->dr(s);
        if (eps_ > 0) {
            if (s < eps_) {
                const double u = s / eps_;
                v += dn_ * (pole_blend(u) + u * blend_d1(u));
            } else if (s > M_ - eps_) {
                const double u = (M_ - s) / eps_;
                v -= ds_ * (pole_blend(u) + u * blend_d1(u));
            }
        }
        for (const auto& b : bumps_) {
            const double x = (s - b.center) / b.width;
            if (x > -1 && x < 1) v += b.amp * band_bump_d1(x) / b.width;
        }
        return v;
    }

    double d2r(double s) const override {
        double v = base_->d2r(s);
        if (eps_ > 0) {
            if (s < eps_) {
                const double u = s / eps_;
                v += dn_ / eps_ * (2.0 * blend_d1(u) + u * blend_d2(u));
            } else if (s > M_ - eps_) {
                const double u = (M_ - s) / eps_;
                v += ds_ / eps_ * (2.0 * blend_d1(u) + u * blend_d2(u));
            }
        }
        for (const auto& b : bumps_) {
            const double x = (s - b.center) / b.width;
            if (x > -1 && x < 1)
                v += b.amp * band_bump_d2(x) / (b.width * b.width);
        }
        return v;
    }

    std::vector<double> breakpoints() const override {
        std::vector<double> bp = base_->breakpoints();
        if (eps_ > 0) {
            bp.push_back(eps_);
            bp.push_back(M_ - eps_);
        }
        for (const auto& b : bumps_) {
            bp.push_back(b.center - b.width);
            bp.push_back(b.center);
            bp.push_back(b.center + b.width);
        }
        return bp;
    }

private:
    static double blend_d1(double x) {
        if (x <= 0 || x >= 1) return 0.0;
        const double omx = 1.0 - x;
        return -30.0 * x * x * omx * omx;
    }
    static double blend_d2(double x) {
        if (x <= 0 || x >= 1) return 0.0;
        return -60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
    }

    std::shared_ptr<const RadialCurve> base_;
    double M_;
    double eps_;
    double dn_, ds_;
    std::vector<BandBump> bumps_;
};

// Monotone C^1 Hermite interpolation with prescribed end slopes.
class SampledCurve final : public RadialCurve {
public:
    SampledCurve(std::vector<double> s, std::vector<double> y,
                 double slope_left, double slope_right)
        : s_(std::move(s)), y_(std::move(y)) {
        const std::size_t n = s_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = s_[k + 1] - s_[k];
            if (h[k] <= 0) throw Error("sampled profile: knots not increasing");
            delta[k] = (y_[k + 1] - y_[k]) / h[k];
        }
        d_.assign(n, 0.0);
        d_.front() = slope_left;
        d_.back() = slope_right;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (delta[k - 1] * delta[k] <= 0) {
                d_[k] = 0.0;
            } else {
                const double w1 = 2.0 * h[k] + h[k - 1];
                const double w2 = h[k] + 2.0 * h[k - 1];
                d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
    }

    double r(double s) const override {
        const auto [k, t, h] = locate(s);
        const double t2 = t * t, t3 = t2 * t;
        return y_[k] * (2 * t3 - 3 * t2 + 1) + h * d_[k] * (t3 - 2 * t2 + t) +
               y_[k + 1] * (-2 * t3 + 3 * t2) + h * d_[k + 1] * (t3 - t2);
    }

    double dr(double s) const override {
        const auto [k, t, h] = locate(s);
        const double t2 = t * t;
        return (y_[k] * (6 * t2 - 6 * t) + h * d_[k] * (3 * t2 - 4 * t + 1) +
                y_[k + 1] * (-6 * t2 + 6 * t) + h * d_[k + 1] * (3 * t2 - 2 * t)) /
               h;
    }

    double d2r(double s) const override {
        const auto [k, t, h] = locate(s);
        return (y_[k] * (12 * t - 6) + h * d_[k] * (6 * t - 4) +
                y_[k + 1] * (-12 * t + 6) + h * d_[k + 1] * (6 * t - 2)) /
               (h * h);
    }

    std::vector<double> breakpoints() const override {
        return {s_.begin() + 1, s_.end() - 1};
    }

private:
    std::tuple<std::size_t, double, double> locate(double s) const {
        auto it = std::upper_bound(s_.begin(), s_.end(), s);
        std::size_t k = (it == s_.begin()) ? 0 : (it - s_.begin() - 1);
        k = std::min(k, s_.size() - 2);
        const double h = s_[k + 1] - s_[k];
        return {k, (s - s_[k]) / h, h};
    }

    std::vector<double> s_, y_;
    std::vector<double> d_;
};

}  // namespace

double pole_blend(double x) {
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

double band_bump(double x) {
    const double q = 1.0 - x * x;
    if (q < 1e-12) return 0.0;
    return std::exp(1.0 - 1.0 / q);
}

double band_bump_d1(double x) {
    const double q = 1.0 - x * x;
    if (q < 1e-12) return 0.0;
    return band_bump(x) * (-2.0 * x / (q * q));
}

double band_bump_d2(double x) {
    const double q = 1.0 - x * x;
    if (q < 1e-12) return 0.0;
    const double g = -2.0 * x / (q * q);
    const double gp = -2.0 / (q * q) - 8.0 * x * x / (q * q * q);
    return band_bump(x) * (g * g + gp);
}

// ---------------------------------------------------------------------------
// MetricProfile
// ---------------------------------------------------------------------------

namespace {

EquatorSet scan_equators(const RadialCurve& curve, double M,
                         const ProfileOptions& opts) {
    const double margin = 1e-6 * M;
    const double a = margin, b = M - margin;
    const int n = opts.scan_grid_n;

    // Reject profiles where r' vanishes on a whole stretch of the grid: the
    // minimal-equator machinery needs isolated critical points.
    {
        const double flat_tol = 1e-8;
        int run = 0;
        for (int i = 0; i <= n; ++i) {
            const double s = a + (b - a) * i / n;
            if (std::abs(curve.dr(s)) < flat_tol) {
                if (++run >= 5) {
                    throw DegenerateCritical(
                        "r' vanishes on an interval near s=" +
                        std::to_string(s));
                }
            } else {
                run = 0;
            }
        }
    }

    const std::function<double(double)> drf = [&](double s) {
        return curve.dr(s);
    };
    EquatorSet set;
    for (const auto& [lo, hi] : sign_change_brackets(drf, a, b, n)) {
        const double root = find_root(drf, lo, hi, opts.root_tol);
        if (!set.all.empty() &&
            std::abs(root - set.all.back().s) < 10 * opts.root_tol)
            continue;
        set.all.push_back({root, curve.r(root)});
    }
    if (set.all.empty())
        throw Error("profile: no interior critical point of r found");

    set.minimal_index = 0;
    for (std::size_t i = 1; i < set.all.size(); ++i) {
        if (set.all[i].radius <
            set.all[set.minimal_index].radius * (1.0 - 1e-12))
            set.minimal_index = i;
    }
    const double rmin = set.all[set.minimal_index].radius;
    for (std::size_t i = 0; i < set.all.size(); ++i) {
        if (i != set.minimal_index &&
            std::abs(set.all[i].radius - rmin) < 1e-9 * rmin)
            set.tie = true;
    }
    return set;
}

}  // namespace

MetricProfile::MetricProfile(OrbifoldSignature sig, double meridian_length,
                             std::shared_ptr<const RadialCurve> curve,
                             Provenance prov, const ProfileOptions& opts)
    : sig_(sig), M_(meridian_length), curve_(std::move(curve)), prov_(prov) {
    validate(opts);
    equators_ = scan_equators(*curve_, M_, opts);
}

void MetricProfile::validate(const ProfileOptions& opts) const {
    if (std::abs(curve_->r(0.0)) > opts.boundary_tol ||
        std::abs(curve_->r(M_)) > opts.boundary_tol)
        throw Error("profile invariant: r(0) = r(M) = 0 violated");

    const double want_north = 1.0 / sig_.m;
    const double want_south = -1.0 / sig_.n;
    if (std::abs(curve_->dr(0.0) - want_north) > opts.cone_slope_tol ||
        std::abs(curve_->dr(M_) - want_south) > opts.cone_slope_tol) {
        std::ostringstream msg;
        msg << "profile invariant: cone slopes r'(0)=" << curve_->dr(0.0)
            << ", r'(M)=" << curve_->dr(M_) << " do not match 1/m=" << want_north
            << ", -1/n=" << want_south;
        throw Error(msg.str());
    }

    for (int i = 1; i < opts.scan_grid_n; ++i) {
        const double s = M_ * i / opts.scan_grid_n;
        if (!(curve_->r(s) > 0.0))
            throw Error("profile invariant: r <= 0 at interior s=" +
                        std::to_string(s));
    }
}

double MetricProfile::equator_length() const {
    return 2.0 * kPi * equators_.minimal().radius;
}

std::vector<double> MetricProfile::quad_breakpoints() const {
    std::vector<double> bp = curve_->breakpoints();
    bp.erase(std::remove_if(bp.begin(), bp.end(),
                            [&](double s) { return s <= 0.0 || s >= M_; }),
             bp.end());
    std::sort(bp.begin(), bp.end());
    return bp;
}

EquatorSet equators(const MetricProfile& p) { return p.equators(); }

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

MetricProfile make_round() {
    return MetricProfile(OrbifoldSignature::make(1, 1), kPi,
                         std::make_shared<RoundCurve>(), Provenance::Round);
}

MetricProfile make_besse(const BesseSpec& spec) {
    spec.check_range();
    auto curve = std::make_shared<BesseCurve>(spec);
    const double M = curve->meridian_length();
    return MetricProfile(spec.signature, M, std::move(curve),
                         Provenance::Besse);
}

MetricProfile perturb_poles(const MetricProfile& base, OrbifoldSignature target,
                            double eps) {
    const double M = base.M();
    if (!(eps > 0 && eps < 0.25 * M))
        throw Error("perturb_poles: require 0 < eps < M/4");

    const double d_north = 1.0 / target.m - base.dr(0.0);
    const double d_south = base.dr(M) + 1.0 / target.n;
    auto curve = std::make_shared<PerturbedCurve>(
        base.curve_ptr(), M, eps, d_north, d_south, std::vector<BandBump>{});

    // The modified bands must stay strictly monotone so no equator is created.
    const int nchk = 2000;
    for (int i = 1; i <= nchk; ++i) {
        const double s = eps * i / (nchk + 1);
        if (!(curve->dr(s) > 0.0))
            throw MonotonicityViolation(
                "north band not increasing at s=" + std::to_string(s));
        if (!(curve->dr(M - s) < 0.0))
            throw MonotonicityViolation(
                "south band not decreasing at s=" + std::to_string(M - s));
    }
    return MetricProfile(target, M, std::move(curve), Provenance::Perturbed);
}

MetricProfile perturb_band(const MetricProfile& base, double center,
                           double width, double amplitude) {
    const double M = base.M();
    if (!(width > 0 && center - width > 0 && center + width < M))
        throw Error("perturb_band: bump support must lie strictly inside (0,M)");
    auto curve = std::make_shared<PerturbedCurve>(
        base.curve_ptr(), M, 0.0, 0.0, 0.0,
        std::vector<BandBump>{{center, width, amplitude}});
    return MetricProfile(base.signature(), M, std::move(curve),
                         Provenance::Perturbed);
}

MetricProfile make_sampled(OrbifoldSignature sig,
                           const std::vector<std::pair<double, double>>& knots) {
    if (knots.size() < 4) throw Error("sampled profile: need at least 4 knots");
    std::vector<double> s, y;
    s.reserve(knots.size());
    y.reserve(knots.size());
    for (const auto& [si, ri] : knots) {
        s.push_back(si);
        y.push_back(ri);
    }
    const double M = s.back();
    auto curve = std::make_shared<SampledCurve>(std::move(s), std::move(y),
                                                1.0 / sig.m, -1.0 / sig.n);
    return MetricProfile(sig, M, std::move(curve), Provenance::Sampled);
}

}  // namespace spindle
