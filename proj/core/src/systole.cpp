#include "spindle/systole.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "spindle/errors.hpp"
#include "spindle/util.hpp"

namespace spindle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

long checked_round(double x, double gate, const char* what) {
    const double r = std::round(x);
    if (std::abs(x - r) > gate) {
        std::ostringstream msg;
        msg << what << " = " << x << " fails the integrality gate " << gate;
        throw Error(msg.str());
    }
    return static_cast<long>(r);
}

}  // namespace

std::vector<ClosedGeodesic> enumerate_closed(const MetricProfile& p,
                                             const Annulus& ann,
                                             const GeneratingFunction& G,
                                             std::span<const ReturnData> returns,
                                             double cutoff, int q_max,
                                             const EnumerateOptions& opts) {
    (void)returns;  // the grid skeleton lives in G, built from these entries
    const auto& sig = p.signature();
    const int alpha = sig.alpha;
    const int order = sig.order;
    const double L = ann.L;
    if (!(cutoff > 0)) throw Error("enumerate_closed: cutoff must be positive");
    if (q_max < 1 + alpha)
        throw Error("enumerate_closed: q_max must be at least 1+alpha");

    std::vector<ClosedGeodesic> out;

    // (a) equator iterates, every equator (isolated orbits).
    for (const auto& e : p.equators().all) {
        const double Le = 2.0 * kPi * e.radius;
        for (int i = 1; i * Le <= cutoff; ++i) {
            ClosedGeodesic g;
            g.kind = GeodesicKind::EquatorIterate;
            g.iterate = i;
            g.equator_s = e.s;
            g.eta = kNaN;
            g.q = 1;
            g.length = i * Le;
            g.total_winding = i;
            g.homotopy = class_of_winding(i, sig);
            g.family = false;
            out.push_back(g);
        }
    }

    const CriticalSet crit = critical_points(G);
    if (crit.all_critical) {
        // Every annulus orbit is closed with the common structure
        // q = 1+alpha, length (1+alpha) mu: one S^1-family entry (the
        // meridian is the eta=0 member).
        ClosedGeodesic g;
        g.kind = GeodesicKind::Oscillating;
        g.eta = 0.5;
        g.q = 1 + alpha;
        g.length = (1 + alpha) * crit.mu;
        g.total_winding = checked_round((1 + alpha) * 0.5 * order, 1e-9,
                                        "family winding");
        g.homotopy = class_of_winding(g.total_winding, sig);
        g.family = true;
        if (g.length <= cutoff) out.push_back(g);
        std::sort(out.begin(), out.end(),
                  [](const ClosedGeodesic& a, const ClosedGeodesic& b) {
                      return a.length < b.length;
                  });
        return out;
    }

    // (c) the meridian family at eta = 0, assembled analytically.
    {
        const ReturnData mr = meridian_return(p);
        ClosedGeodesic g;
        g.kind = GeodesicKind::Meridian;
        g.eta = 0.0;
        g.q = 1 + alpha;
        g.length = (1 + alpha) * mr.tau;
        g.total_winding =
            checked_round((1 + alpha) * mr.winding, 1e-9, "meridian winding");
        g.homotopy = class_of_winding(g.total_winding, sig);
        g.family = true;
        if (g.length <= cutoff) out.push_back(g);
    }

    // (b) oscillating closures: roots of F'(eta) = (2p - q alpha) L / (2q).
    // Collect the valid interior grid skeleton of F'. Pairs separated by a
    // censored gap are not searchable, but any orbit hiding there has
    // tau above the time cap and hence length far beyond the cutoff.
    std::vector<double> ge, gf;
    std::vector<bool> adjacent;  // [i]: entries i, i+1 contiguous in the grid
    {
        std::size_t last_idx = 0;
        bool have_last = false;
        for (std::size_t i = 0; i < G.eta.size(); ++i) {
            if (!G.valid[i] || std::isnan(G.Fp[i])) continue;
            if (std::abs(G.eta[i]) >= 1.0) continue;
            if (have_last) adjacent.push_back(i == last_idx + 1);
            ge.push_back(G.eta[i]);
            gf.push_back(G.Fp[i]);
            last_idx = i;
            have_last = true;
        }
    }
    if (ge.size() < 8)
        throw GridTooCoarse("fewer than 8 valid return-grid entries");

    // Steep stretches of F' (e.g. the near-meridian layer of pole-modified
    // profiles, where the winding climbs to (m+n)/2 over a narrow band of
    // heights) are refined in place with the exact evaluator until no cell
    // jumps by more than the root-safety threshold.
    const double max_jump = L / (2.0 * q_max);
    if (G.fp_eval) {
        int budget = 4000;
        std::size_t i = 0;
        while (i + 1 < ge.size()) {
            if (!adjacent[i] ||
                std::abs(gf[i + 1] - gf[i]) <= max_jump ||
                ge[i + 1] - ge[i] < 1e-9) {
                ++i;
                continue;
            }
            if (--budget < 0)
                throw GridTooCoarse(
                    "refinement budget exhausted while densifying F'");
            const double mid = 0.5 * (ge[i] + ge[i + 1]);
            const double fmid =
                (mid == 0.0) ? 0.0 : G.fp_eval(mid);
            ge.insert(ge.begin() + i + 1, mid);
            gf.insert(gf.begin() + i + 1, fmid);
            adjacent.insert(adjacent.begin() + i + 1, true);
        }
    }
    for (std::size_t i = 0; i + 1 < ge.size(); ++i) {
        if (!adjacent[i]) continue;
        if (std::abs(gf[i + 1] - gf[i]) > max_jump) {
            std::ostringstream msg;
            msg << "adjacent F' jump " << std::abs(gf[i + 1] - gf[i])
                << " exceeds L/(2 q_max) = " << max_jump
                << " near eta=" << ge[i];
            throw GridTooCoarse(msg.str());
        }
    }

    struct Found {
        double abs_eta;
        int q;
    };
    std::vector<Found> seen;
    auto already_seen = [&](double abs_eta, int q) {
        for (const auto& f : seen) {
            if (std::abs(f.abs_eta - abs_eta) < 1e-7 && q % f.q == 0)
                return true;
        }
        return false;
    };

    const double fp_lo = *std::min_element(gf.begin(), gf.end());
    const double fp_hi = *std::max_element(gf.begin(), gf.end());

    // Tight-tolerance slope evaluator for the final polish: near-pole swings
    // bias the grid-speed theta by ~1e-7, which would leave candidates with
    // a visible xi-defect per return.
    const double half_order = 0.5 * order;
    auto fp_tight = [&](double eta) {
        const ReturnData rd = first_return(p, ann, eta, opts.polish);
        return L * (rd.winding - half_order);
    };

    for (int q = 1; q <= q_max; ++q) {
        // admissible xi-advance lattice: F' = k L/(2q), k = 2p - q alpha
        const int k_lo = static_cast<int>(std::floor(2.0 * q * fp_lo / L)) - 1;
        const int k_hi = static_cast<int>(std::ceil(2.0 * q * fp_hi / L)) + 1;
        for (int k = k_lo; k <= k_hi; ++k) {
            if (((k - q * alpha) % 2 + 2) % 2 != 0) continue;  // k = q alpha (mod 2)
            const int pnum = (k + q * alpha) / 2;
            if (std::gcd(std::abs(pnum), q) != 1)
                continue;  // closes already at q/gcd(p,q) returns
            const double target = k * L / (2.0 * q);
            for (std::size_t i = 0; i + 1 < ge.size(); ++i) {
                if (!adjacent[i]) continue;
                const double a = gf[i] - target, b = gf[i + 1] - target;
                if (a * b > 0.0 || (a == 0.0 && b == 0.0)) continue;
                double eta0;
                if (a == 0.0) {
                    eta0 = ge[i];  // root sits on a grid point
                } else if (b == 0.0) {
                    eta0 = ge[i + 1];
                } else {
                    // refine by bisection on the exact evaluator
                    double lo = ge[i], hi = ge[i + 1], flo = a, fhi = b;
                    if (G.fp_eval) {
                        for (int it = 0;
                             it < 100 && (hi - lo) > opts.root_tol; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            const double fm = G.fp_eval(mid) - target;
                            if (fm == 0.0) {
                                lo = hi = mid;
                                flo = fhi = 0.0;
                                break;
                            }
                            if ((fm > 0) == (flo > 0)) {
                                lo = mid;
                                flo = fm;
                            } else {
                                hi = mid;
                                fhi = fm;
                            }
                        }
                    }
                    eta0 = 0.5 * (lo + hi);
                    // Secant polish on the tight evaluator: where F' is steep
                    // (winding layers) the eta tolerance alone leaves a
                    // xi-defect q |F''| d_eta per return.
                    {
                        double x0 = lo, x1 = eta0;
                        double f0 = fp_tight(x0) - target;
                        double f1 = fp_tight(x1) - target;
                        double best_x = std::abs(f0) < std::abs(f1) ? x0 : x1;
                        double best_f = std::min(std::abs(f0), std::abs(f1));
                        for (int it = 0; it < 6 && f1 != f0; ++it) {
                            const double x2 =
                                x1 - f1 * (x1 - x0) / (f1 - f0);
                            if (!(x2 > ge[i] && x2 < ge[i + 1])) break;
                            const double f2 = fp_tight(x2) - target;
                            x0 = x1;
                            f0 = f1;
                            x1 = x2;
                            f1 = f2;
                            if (std::abs(f2) < best_f) {
                                best_f = std::abs(f2);
                                best_x = x2;
                            }
                            if (best_f < 1e-11 * L) break;
                        }
                        eta0 = best_x;
                    }
                }
                if (std::abs(eta0) < opts.meridian_eta_exclusion)
                    continue;  // the meridian entry covers eta = 0
                if (already_seen(std::abs(eta0), q)) continue;

                const ReturnData rd = first_return(p, ann, eta0, opts.polish);
                const double length = q * rd.tau;
                if (length > cutoff) continue;

                ClosedGeodesic g;
                g.kind = GeodesicKind::Oscillating;
                g.eta = eta0;
                g.q = q;
                g.length = length;
                g.total_winding = checked_round(q * rd.winding,
                                                opts.winding_gate,
                                                "oscillating total winding");
                g.homotopy = class_of_winding(g.total_winding, sig);
                g.family = true;
                // Collapse connected families: when F' sits identically on a
                // closure target over a whole band (untouched round bands of
                // perturbed profiles), every cell yields the same orbit data.
                bool dup = false;
                for (const auto& h : out) {
                    if (h.kind == GeodesicKind::Oscillating && h.q == g.q &&
                        h.total_winding == g.total_winding &&
                        std::abs(h.length - g.length) < 1e-6 * L) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) out.push_back(g);
                seen.push_back({std::abs(eta0), q});
            }
        }
    }

    std::sort(out.begin(), out.end(),
              [](const ClosedGeodesic& a, const ClosedGeodesic& b) {
                  return a.length < b.length;
              });
    return out;
}

double l_min_in_class(std::span<const ClosedGeodesic> geodesics,
                      const OrbifoldSignature& sig, int k, double cutoff) {
    if (k < 1 || sig.order % k != 0)
        throw NotADivisor("k=" + std::to_string(k));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : geodesics) {
        for (int i = 1; i <= sig.order; ++i) {
            const HomotopyClass c =
                class_of_winding(i * g.total_winding, sig);
            if (in_subgroup_of_order(c, k, sig)) {
                best = std::min(best, i * g.length);
                break;  // higher iterates of the same orbit are longer
            }
        }
    }
    if (!std::isfinite(best))
        throw CutoffTooSmall("no geodesic found in subgroup of order " +
                             std::to_string(k));
    if (best > cutoff)
        throw CutoffTooSmall(
            "class minimum exceeds the enumeration cutoff; shorter "
            "non-enumerated geodesics cannot be excluded");
    return best;
}

std::vector<double> tau_sequence(std::span<const ClosedGeodesic> geodesics,
                                 int count) {
    double family_len = std::numeric_limits<double>::infinity();
    for (const auto& g : geodesics)
        if (g.family) family_len = std::min(family_len, g.length);
    if (!std::isfinite(family_len))
        throw CutoffTooSmall("no S^1-family found below the cutoff");

    std::vector<double> isolated;
    for (const auto& g : geodesics)
        if (!g.family && g.length <= family_len) isolated.push_back(g.length);
    std::sort(isolated.begin(), isolated.end());

    std::vector<double> seq;
    seq.reserve(count);
    for (double len : isolated) {
        if (static_cast<int>(seq.size()) >= count) break;
        if (len <= family_len) seq.push_back(len);
    }
    while (static_cast<int>(seq.size()) < count) seq.push_back(family_len);
    return seq;
}

double closure_residual(const MetricProfile& p, const Annulus& ann,
                        const ClosedGeodesic& g, const ReturnOptions& opts) {
    PhasePoint x0;
    if (g.kind == GeodesicKind::Meridian) return -1;  // analytic assembly
    if (g.kind == GeodesicKind::EquatorIterate) {
        x0 = {0.0, 0.0, g.equator_s};
    } else {
        if (std::isnan(g.eta)) return -1;
        x0 = {0.0, std::acos(-g.eta), ann.s0};
    }
    IntegrateOptions io;
    io.rel_tol = opts.rel_tol;
    io.abs_tol = opts.abs_tol;
    io.record = false;
    const Trajectory traj = integrate(p, x0, g.length, io);
    const PhasePoint xf = traj.states.back();
    const double dtheta = std::remainder(xf.theta - x0.theta, 2.0 * kPi);
    const double dbeta = std::remainder(xf.beta - x0.beta, 2.0 * kPi);
    const double ds = xf.s - x0.s;
    return std::sqrt(ann.r0 * ann.r0 * dtheta * dtheta + dbeta * dbeta +
                     ds * ds);
}

namespace {

BoundCheck make_check(bool applicable, double ratio, double bound,
                      double tol) {
    BoundCheck c;
    c.applicable = applicable;
    c.ratio = ratio;
    c.bound = bound;
    if (!applicable) return c;
    c.margin = (bound - ratio) / bound;
    if (ratio > bound * (1.0 + tol))
        c.verdict = Verdict::Violation;
    else if (std::abs(ratio - bound) <= bound * tol)
        c.verdict = Verdict::AtBound;
    else
        c.verdict = Verdict::BelowBound;
    return c;
}

}  // namespace

SystoleReport ratios(const MetricProfile& p, const VolumeReport& vol,
                     std::vector<ClosedGeodesic> geodesics, double cutoff,
                     bool besse_flat, double at_bound_tol) {
    const auto& sig = p.signature();
    const int order = sig.order;
    const int alpha = sig.alpha;

    SystoleReport rep;
    rep.sig = sig;
    rep.area = vol.area;
    rep.L = p.equator_length();
    rep.vol = vol;
    rep.besse_flat = besse_flat;
    std::sort(geodesics.begin(), geodesics.end(),
              [](const ClosedGeodesic& a, const ClosedGeodesic& b) {
                  return a.length < b.length;
              });
    rep.geodesics = std::move(geodesics);

    rep.l_min = rep.geodesics.empty() ? kNaN : rep.geodesics.front().length;
    for (int k = 1; k <= order; ++k) {
        if (order % k != 0) continue;
        rep.l_min_k[k] = l_min_in_class(rep.geodesics, sig, k, cutoff);
    }
    rep.l_min_contr = rep.l_min_k.at(1);

    const int period_index = order / (2 - alpha);
    rep.tau_seq = tau_sequence(rep.geodesics, period_index);

    rep.rho_sys = rep.l_min * rep.l_min / rep.area;
    rep.rho_contr = rep.l_min_contr * rep.l_min_contr / rep.area;
    rep.rho_contr_2 = (order % 2 == 0)
                          ? rep.l_min_k.at(2) * rep.l_min_k.at(2) / rep.area
                          : kNaN;
    const double tau_top = rep.tau_seq.back();
    rep.rho_periodspec = tau_top * tau_top / rep.area;
    rep.rho_contact_lift = rep.rho_contr / (2.0 * kPi * order);

    rep.bound_contr = make_check(true, rep.rho_contr, 2.0 * order * kPi,
                                 at_bound_tol);
    rep.bound_half = make_check(order % 2 == 0, rep.rho_contr_2,
                                0.5 * order * kPi, at_bound_tol);
    rep.bound_period =
        make_check(true, rep.rho_periodspec,
                   2.0 * order * kPi / ((2 - alpha) * (2 - alpha)),
                   at_bound_tol);
    return rep;
}

AnalysisResult analyze(const MetricProfile& p, const AnalysisNumerics& num) {
    const auto& sig = p.signature();
    if (num.eta_grid_n % 2 == 0)
        throw ConfigParse("eta_grid_n must be odd so the grid contains 0");

    AnalysisResult res;
    res.annulus = make_annulus(p);
    const double L = res.annulus.L;

    ReturnOptions ropts;
    ropts.rel_tol = num.ode_rel_tol;
    ropts.abs_tol = num.ode_abs_tol;
    ropts.time_cap_factor = num.time_cap_factor;

    GridOptions gopts;
    gopts.eta_margin = num.eta_margin;
    gopts.jobs = num.jobs;
    gopts.ret = ropts;
    res.returns = return_grid(p, num.eta_grid_n, gopts);

    res.G_ret = genfun_from_returns(p, res.annulus, res.returns, ropts);

    QuadOptions quad{num.quad_rel_tol, num.quad_abs_tol, 400};
    std::vector<double> eta_grid = res.G_ret.eta;
    eta_grid.insert(eta_grid.begin(), -1.0);
    eta_grid.push_back(1.0);
    res.G_int = genfun_from_integral(p, eta_grid, quad);
    res.fp_fd_max_dev = res.G_int.fp_fd_max_dev;

    // Cross-route agreement on the common valid grid.
    for (std::size_t i = 0; i < res.G_ret.eta.size(); ++i) {
        if (!res.G_ret.valid[i]) continue;
        const double fi = res.G_int.f_eval(res.G_ret.eta[i]);
        res.route_max_dev =
            std::max(res.route_max_dev, std::abs(fi - res.G_ret.F[i]));
    }

    // Winding identity residual: F'(eta) = L (W - (m+n)/2), the two-branch
    // identity after the continuity normalization of W.
    for (std::size_t i = 0; i < res.returns.size(); ++i) {
        const auto& rd = res.returns[i];
        if (rd.censored || rd.eta == 0.0) continue;
        const double fp_int = res.G_int.fp_eval(rd.eta);
        const double resid =
            std::abs(fp_int - L * (rd.winding - 0.5 * sig.order));
        res.winding_identity_dev = std::max(res.winding_identity_dev, resid);
    }

    res.crit = critical_points(res.G_ret);

    const VolumeReport vol = contact_volume_decomposed(p, res.G_int, quad);

    const int q_max = num.q_max > 0 ? num.q_max : 2 * (2 - sig.alpha);
    const double cutoff = num.length_cutoff > 0 ? num.length_cutoff
                                                : 3.0 * sig.order * L;
    EnumerateOptions eopts;
    eopts.ret = ropts;
    auto geodesics = enumerate_closed(p, res.annulus, res.G_ret, res.returns,
                                      cutoff, q_max, eopts);

    if (num.verify_closures) {
        // Verify each geometric orbit once: closure of the i-th iterate is
        // implied by closure of the prime orbit, while re-integration noise
        // along a hyperbolic equator grows like the i-th power of the
        // Floquet multiplier and would drown the check.
        ReturnOptions tight = ropts;
        tight.rel_tol = num.closure_rel_tol;
        tight.abs_tol = num.closure_abs_tol;
        std::map<double, double> equator_resid;
        for (auto& g : geodesics) {
            if (g.kind == GeodesicKind::EquatorIterate && g.iterate > 1) {
                auto it = equator_resid.find(g.equator_s);
                if (it != equator_resid.end()) g.closure_residual = it->second;
                continue;
            }
            ClosedGeodesic prime = g;
            if (g.kind == GeodesicKind::EquatorIterate)
                prime.length = g.length / g.iterate;
            g.closure_residual =
                closure_residual(p, res.annulus, prime, tight);
            if (g.kind == GeodesicKind::EquatorIterate)
                equator_resid[g.equator_s] = g.closure_residual;
            if (g.closure_residual >= 0)
                res.max_closure_residual =
                    std::max(res.max_closure_residual, g.closure_residual);
        }
    }

    res.report = ratios(p, vol, std::move(geodesics), cutoff,
                        res.crit.all_critical, num.at_bound_tol);
    return res;
}

}  // namespace spindle
