#include "spindle/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spindle/errors.hpp"
#include "spindle/util.hpp"

namespace spindle {

namespace {

// Maximal intervals of {s : r(s) > kappa}, endpoints refined to roots of
// r - kappa, split at equators lying inside (the sqrt integrands lose one
// derivative at tangential touch points).
std::vector<std::pair<double, double>> superlevel_intervals(
    const MetricProfile& p, double kappa, double root_tol = 1e-15) {
    const double M = p.M();
    const double margin = 1e-9 * M;
    const std::function<double(double)> f = [&](double s) {
        return p.r(s) - kappa;
    };

    std::vector<double> roots;
    for (const auto& [lo, hi] : sign_change_brackets(f, margin, M - margin, 8192)) {
        const double root = find_root(f, lo, hi, root_tol);
        if (roots.empty() || std::abs(root - roots.back()) > 10 * root_tol)
            roots.push_back(root);
    }

    std::vector<std::pair<double, double>> intervals;
    // r < kappa near both poles (r -> 0), so intervals pair up in order.
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        const double mid = 0.5 * (roots[i] + roots[i + 1]);
        if (f(mid) > 0) intervals.emplace_back(roots[i], roots[i + 1]);
    }
    return intervals;
}

std::vector<double> interior_split_points(const MetricProfile& p, double a,
                                          double b) {
    std::vector<double> splits;
    for (const auto& e : p.equators().all)
        if (e.s > a && e.s < b) splits.push_back(e.s);
    for (double s : p.quad_breakpoints())
        if (s > a && s < b) splits.push_back(s);
    std::sort(splits.begin(), splits.end());
    return splits;
}

// Integral of f over [a,b] with sqrt-type endpoint behavior, split at
// interior kinks; each piece gets the cos substitution.
double sqrt_quad(const MetricProfile& p,
                 const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& quad) {
    const auto splits = interior_split_points(p, a, b);
    double lo = a, total = 0;
    for (double x : splits) {
        total += integrate_cos_substituted(f, lo, x, quad);
        lo = x;
    }
    total += integrate_cos_substituted(f, lo, b, quad);
    return total;
}

double F_area_term(const MetricProfile& p, double kappa,
                   const QuadOptions& quad) {
    if (kappa == 0.0) return 2.0 * p.M();
    double total = 0;
    for (const auto& [a, b] : superlevel_intervals(p, kappa)) {
        const std::function<double(double)> f = [&](double s) {
            const double r = p.r(s);
            const double q = std::max(0.0, 1.0 - (kappa / r) * (kappa / r));
            return 2.0 * std::sqrt(q);
        };
        total += sqrt_quad(p, f, a, b, quad);
    }
    return total;
}

double Fp_slope_integral(const MetricProfile& p, double kappa,
                         const QuadOptions& quad) {
    double total = 0;
    for (const auto& [a, b] : superlevel_intervals(p, kappa)) {
        const std::function<double(double)> f = [&](double s) {
            const double r = p.r(s);
            const double q = 1.0 - (kappa / r) * (kappa / r);
            // roundoff can put a node a few ulp outside the superlevel set,
            // where the true domain contributes nothing
            if (q <= 0) return 0.0;
            return 1.0 / (r * r * std::sqrt(q));
        };
        total += sqrt_quad(p, f, a, b, quad);
    }
    return total;
}

}  // namespace

// {r >= r0}: the same superlevel machinery at the critical level. Intervals
// of zero length (the reference equator when it is the global maximum)
// disappear on their own because no sign change brackets them.
double gamma_slice_integral(const MetricProfile& p,
                            const std::function<double(double)>& f,
                            const QuadOptions& quad) {
    const double r0 = p.equators().minimal().radius;
    double total = 0;
    for (const auto& [a, b] : superlevel_intervals(p, r0)) {
        total += sqrt_quad(p, f, a, b, quad);
    }
    return total;
}

double GeneratingFunction::min_valid_F() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < F.size(); ++i)
        if (valid[i]) m = std::min(m, F[i]);
    return m;
}

double GeneratingFunction::max_valid_F() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < F.size(); ++i)
        if (valid[i]) m = std::max(m, F[i]);
    return m;
}

GeneratingFunction genfun_from_integral(const MetricProfile& p,
                                        std::span<const double> eta_grid,
                                        const QuadOptions& quad) {
    const Annulus ann = make_annulus(p);
    const auto& sig = p.signature();
    const double half_order_L = 0.5 * sig.order * ann.L;

    GeneratingFunction G;
    G.L = ann.L;
    G.signature = sig;
    G.route = GenfunRoute::FromIntegral;
    G.eta.assign(eta_grid.begin(), eta_grid.end());
    std::sort(G.eta.begin(), G.eta.end());

    const double r0 = ann.r0;
    const MetricProfile* pp = &p;  // the profile must outlive the evaluators
    auto F_at = [pp, r0, half_order_L, quad](double eta) {
        const double a = std::abs(eta);
        if (a >= 1.0) {
            const std::function<double(double)> f = [pp, r0](double s) {
                const double r = pp->r(s);
                const double q = std::max(0.0, 1.0 - (r0 / r) * (r0 / r));
                return 2.0 * std::sqrt(q);
            };
            return gamma_slice_integral(*pp, f, quad) + half_order_L;
        }
        return F_area_term(*pp, r0 * a, quad) + half_order_L * a;
    };
    const double half_order_L_copy = half_order_L;
    auto Fp_at = [pp, r0, half_order_L_copy, quad](double eta) {
        if (eta == 0.0) return 0.0;
        const double a = std::abs(eta);
        if (a >= 1.0) return std::numeric_limits<double>::quiet_NaN();
        const double slope = half_order_L_copy -
                             2.0 * r0 * r0 * a *
                                 Fp_slope_integral(*pp, r0 * a, quad);
        return eta > 0 ? slope : -slope;
    };

    G.F.resize(G.eta.size());
    G.Fp.resize(G.eta.size());
    G.valid.assign(G.eta.size(), true);
    for (std::size_t i = 0; i < G.eta.size(); ++i) {
        G.F[i] = F_at(G.eta[i]);
        G.Fp[i] = Fp_at(G.eta[i]);
    }
    G.endpoint_value = F_at(1.0);

    // The differentiated-under-the-integral slope loses meaning at |eta|=1
    // (the collapsing superlevel component contributes a finite limit that
    // the closed-endpoint formula drops); extrapolate for reporting only.
    for (std::size_t i = 0; i < G.eta.size(); ++i) {
        if (std::isnan(G.Fp[i])) {
            // quadratic extrapolation from the three nearest interior points
            std::vector<std::size_t> near;
            if (G.eta[i] > 0) {
                for (std::size_t j = G.eta.size(); j-- > 0 && near.size() < 3;)
                    if (!std::isnan(G.Fp[j]) && std::abs(G.eta[j]) < 1.0)
                        near.push_back(j);
            } else {
                for (std::size_t j = 0; j < G.eta.size() && near.size() < 3; ++j)
                    if (!std::isnan(G.Fp[j]) && std::abs(G.eta[j]) < 1.0)
                        near.push_back(j);
            }
            if (near.size() == 3) {
                const double x0 = G.eta[near[0]], x1 = G.eta[near[1]],
                             x2 = G.eta[near[2]];
                const double y0 = G.Fp[near[0]], y1 = G.Fp[near[1]],
                             y2 = G.Fp[near[2]];
                const double x = G.eta[i];
                G.Fp[i] = y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
                          y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
                          y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
            } else {
                G.Fp[i] = 0.0;
            }
        }
    }

    // Finite-difference cross-check of the slope on interior points
    // (diagnostic only; the three-point stencil is exact for quadratics on
    // the non-uniform grid).
    for (std::size_t i = 1; i + 1 < G.eta.size(); ++i) {
        if (std::abs(G.eta[i]) >= 1.0 || std::abs(G.eta[i + 1]) >= 1.0 ||
            std::abs(G.eta[i - 1]) >= 1.0)
            continue;
        const double a = G.eta[i - 1], b = G.eta[i], c = G.eta[i + 1];
        const double fd =
            G.F[i - 1] * (b - c) / ((a - b) * (a - c)) +
            G.F[i] * (2 * b - a - c) / ((b - a) * (b - c)) +
            G.F[i + 1] * (b - a) / ((c - a) * (c - b));
        G.fp_fd_max_dev = std::max(G.fp_fd_max_dev, std::abs(fd - G.Fp[i]));
    }

    G.f_eval = F_at;
    G.fp_eval = [Fp_at](double eta) { return Fp_at(eta); };
    return G;
}

GeneratingFunction genfun_from_returns(std::span<const ReturnData> returns,
                                       OrbifoldSignature sig, double L) {
    GeneratingFunction G;
    G.L = L;
    G.signature = sig;
    G.route = GenfunRoute::FromReturnMap;

    std::vector<ReturnData> rs(returns.begin(), returns.end());
    std::sort(rs.begin(), rs.end(),
              [](const ReturnData& a, const ReturnData& b) {
                  return a.eta < b.eta;
              });

    G.eta.resize(rs.size());
    G.F.resize(rs.size());
    G.Fp.resize(rs.size());
    G.valid.resize(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        G.eta[i] = rs[i].eta;
        G.valid[i] = !rs[i].censored;
        if (!G.valid[i]) {
            G.F[i] = G.Fp[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        G.Fp[i] = L * (rs[i].winding - 0.5 * sig.order);
        G.F[i] = rs[i].tau + rs[i].eta * G.Fp[i];
    }

    // Oddness of F' across the symmetric grid.
    if (!rs.empty()) {
        for (std::size_t i = 0, j = rs.size() - 1; i < j; ++i, --j) {
            if (!G.valid[i] || !G.valid[j]) continue;
            if (std::abs(G.eta[i] + G.eta[j]) > 1e-12) continue;
            if (std::abs(G.Fp[i] + G.Fp[j]) > 1e-5 * L) {
                std::ostringstream msg;
                msg << "F' oddness violated at eta=+-" << std::abs(G.eta[i])
                    << ": " << G.Fp[i] << " vs " << G.Fp[j];
                throw InconsistentData(msg.str());
            }
        }
    }

    G.endpoint_value = std::numeric_limits<double>::quiet_NaN();
    return G;
}

GeneratingFunction genfun_from_returns(const MetricProfile& p,
                                       const Annulus& ann,
                                       std::span<const ReturnData> returns,
                                       const ReturnOptions& ropts) {
    GeneratingFunction G =
        genfun_from_returns(returns, p.signature(), ann.L);
    const auto sig = p.signature();
    const double L = ann.L;
    const MetricProfile* pp = &p;  // the profile must outlive the evaluators
    G.fp_eval = [pp, ann, sig, L, ropts](double eta) {
        if (eta == 0.0) return 0.0;
        const ReturnData rd = first_return(*pp, ann, eta, ropts);
        return L * (rd.winding - 0.5 * sig.order);
    };
    G.f_eval = [pp, ann, sig, L, ropts](double eta) {
        if (eta == 0.0) return 2.0 * pp->M();
        const ReturnData rd = first_return(*pp, ann, eta, ropts);
        const double fp = L * (rd.winding - 0.5 * sig.order);
        return rd.tau + eta * fp;
    };
    return G;
}

CriticalSet critical_points(const GeneratingFunction& G) {
    CriticalSet out;

    // Numerically constant F: every eta is critical.
    const double span = G.max_valid_F() - G.min_valid_F();
    if (span < 1e-6 * G.L) {
        out.all_critical = true;
        double sum = 0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < G.F.size(); ++i) {
            if (G.valid[i]) {
                sum += G.F[i];
                ++cnt;
            }
        }
        out.mu = cnt ? sum / cnt : 0.0;
        return out;
    }

    auto fp_of = [&](double eta) -> double {
        if (G.fp_eval) return G.fp_eval(eta);
        // linear interpolation fallback on the grid
        auto it = std::upper_bound(G.eta.begin(), G.eta.end(), eta);
        std::size_t k = it == G.eta.begin() ? 0 : (it - G.eta.begin() - 1);
        k = std::min(k, G.eta.size() - 2);
        const double t = (eta - G.eta[k]) / (G.eta[k + 1] - G.eta[k]);
        return (1 - t) * G.Fp[k] + t * G.Fp[k + 1];
    };
    auto f_of = [&](double eta) -> double {
        if (G.f_eval) return G.f_eval(eta);
        auto it = std::upper_bound(G.eta.begin(), G.eta.end(), eta);
        std::size_t k = it == G.eta.begin() ? 0 : (it - G.eta.begin() - 1);
        k = std::min(k, G.eta.size() - 2);
        const double t = (eta - G.eta[k]) / (G.eta[k + 1] - G.eta[k]);
        return (1 - t) * G.F[k] + t * G.F[k + 1];
    };

    std::vector<double> roots{0.0};  // F' is odd: eta = 0 is always critical
    for (std::size_t i = 0; i + 1 < G.eta.size(); ++i) {
        if (!G.valid[i] || !G.valid[i + 1]) continue;
        if (std::abs(G.eta[i]) >= 1.0 || std::abs(G.eta[i + 1]) >= 1.0)
            continue;
        const double a = G.Fp[i], b = G.Fp[i + 1];
        if (std::isnan(a) || std::isnan(b)) continue;
        if (a == 0.0 || a * b >= 0.0) continue;
        // bisection on the route's evaluator
        double lo = G.eta[i], hi = G.eta[i + 1];
        if (lo < 0.0 && hi > 0.0) continue;  // the eta=0 root is analytic
        double flo = a;
        for (int it2 = 0; it2 < 100 && (hi - lo) > 1e-10; ++it2) {
            const double mid = 0.5 * (lo + hi);
            const double fm = fp_of(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) {
                                return std::abs(a - b) < 1e-7;
                            }),
                roots.end());

    for (double eta0 : roots) {
        CriticalPoint cp;
        cp.eta = eta0;
        cp.mu = f_of(eta0);
        const double delta = 1e-4;
        const double left = fp_of(eta0 - delta);
        const double right = fp_of(eta0 + delta);
        if (left < 0 && right > 0)
            cp.kind = CriticalPoint::Kind::Min;
        else if (left > 0 && right < 0)
            cp.kind = CriticalPoint::Kind::Max;
        else
            cp.kind = CriticalPoint::Kind::Inflection;
        out.points.push_back(cp);
    }
    return out;
}

}  // namespace spindle
