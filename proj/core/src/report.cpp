#include "spindle/report.hpp"

#include <cmath>
#include <iomanip>

#include "spindle/csv.hpp"
#include "spindle/util.hpp"

namespace spindle {

namespace {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Round: return "round";
        case Provenance::Besse: return "besse";
        case Provenance::Perturbed: return "perturbed";
        case Provenance::Sampled: return "sampled";
    }
    return "?";
}

const char* kind_name(GeodesicKind k) {
    switch (k) {
        case GeodesicKind::EquatorIterate: return "equator";
        case GeodesicKind::Meridian: return "meridian";
        case GeodesicKind::Oscillating: return "oscillating";
    }
    return "?";
}

void print_check(std::ostream& out, const char* label, const BoundCheck& c) {
    if (!c.applicable) {
        out << "  " << label << ": n/a\n";
        return;
    }
    out << "  " << label << ": ratio=" << c.ratio << " bound=" << c.bound
        << " margin=" << c.margin << " verdict=" << verdict_name(c.verdict)
        << "\n";
}

}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::BelowBound: return "BelowBound";
        case Verdict::AtBound: return "AtBound";
        case Verdict::Violation: return "Violation";
    }
    return "?";
}

int exit_code_for(const SystoleReport& rep) {
    for (const BoundCheck* c :
         {&rep.bound_contr, &rep.bound_half, &rep.bound_period}) {
        if (c->applicable && c->verdict == Verdict::Violation) return 2;
    }
    return 0;
}

void write_report(std::ostream& out, const MetricProfile& p,
                  const AnalysisResult& res, const RunConfig& cfg) {
    const auto& rep = res.report;
    const auto& sig = rep.sig;
    out << std::setprecision(12);
    out << "spindle orbifold analysis\n";
    out << "=========================\n\n";
    out << "profile: " << provenance_name(p.provenance()) << " S^2(" << sig.m
        << "," << sig.n << "), alpha=" << sig.alpha << ", M=" << p.M() << "\n";
    out << "equators (s, radius):";
    for (const auto& e : p.equators().all)
        out << " (" << e.s << ", " << e.radius << ")";
    out << "\nreference equator: s0=" << res.annulus.s0
        << " r0=" << res.annulus.r0 << " L=" << res.annulus.L;
    if (p.equators().tie) out << "  [warning: minimal radius tie]";
    out << "\n\n";

    out << "area = " << rep.area << "\n";
    out << "contact volume (direct 2*pi*area) = " << rep.vol.vol_direct << "\n";
    out << "contact volume (generating-function decomposition) = "
        << rep.vol.vol_decomposed << "\n";
    out << "  saturated part = " << rep.vol.saturated_part
        << ", boundary-region part = " << rep.vol.gamma_part << "\n";
    out << "  relative mismatch = " << rep.vol.rel_mismatch << "\n\n";

    out << "generating function: " << (rep.besse_flat
                                           ? "numerically constant (all "
                                             "heights critical)"
                                           : "non-constant")
        << "\n";
    out << "  cross-route max |F_int - F_ret| = " << res.route_max_dev
        << "  (" << res.route_max_dev / rep.L << " L)\n";
    out << "  winding identity max residual = " << res.winding_identity_dev
        << "\n";
    if (!res.crit.all_critical) {
        out << "  critical points (eta, mu, kind):\n";
        for (const auto& cpt : res.crit.points) {
            const char* k = cpt.kind == CriticalPoint::Kind::Min   ? "min"
                            : cpt.kind == CriticalPoint::Kind::Max ? "max"
                                                                   : "infl";
            out << "    " << cpt.eta << "  " << cpt.mu << "  " << k << "\n";
        }
    }
    out << "\n";

    out << "closed geodesics (length-sorted, up to cutoff):\n";
    out << "  kind        q  iterate  eta          length        winding  "
           "class  family  closure_resid\n";
    for (const auto& g : rep.geodesics) {
        out << "  " << std::left << std::setw(11) << kind_name(g.kind)
            << std::right << " " << g.q << "  " << std::setw(7) << g.iterate
            << "  " << std::setw(11)
            << (std::isnan(g.eta) ? 0.0 : g.eta) << "  " << std::setw(12)
            << g.length << "  " << std::setw(7) << g.total_winding << "  "
            << std::setw(5) << g.homotopy.value << "  " << std::setw(6)
            << (g.family ? "yes" : "no") << "  ";
        if (g.closure_residual >= 0)
            out << g.closure_residual;
        else
            out << "analytic";
        out << "\n";
    }
    out << "\n";

    out << "shortest lengths:\n";
    out << "  l_min (any class) = " << rep.l_min << "\n";
    out << "  l_min_contr       = " << rep.l_min_contr << "\n";
    for (const auto& [k, v] : rep.l_min_k)
        out << "  l_min_k[" << k << "] = " << v << "\n";
    out << "  tau sequence:";
    for (double t : rep.tau_seq) out << " " << t;
    out << "\n\n";

    out << "systolic ratios:\n";
    out << "  rho_sys         = " << rep.rho_sys << "\n";
    out << "  rho_contr       = " << rep.rho_contr << "\n";
    if (sig.order % 2 == 0)
        out << "  rho_contr_2     = " << rep.rho_contr_2 << "\n";
    out << "  rho_periodspec  = " << rep.rho_periodspec << "  (index "
        << sig.order / (2 - sig.alpha) << ")\n";
    out << "  contact-lift systolic ratio rho_contr / (2 pi (m+n)) = "
        << rep.rho_contact_lift << "\n\n";

    out << "sharp bounds (equality exactly on the closed-geodesic family):\n";
    print_check(out, "contractible bound  rho_contr      <= 2(m+n)pi      ",
                rep.bound_contr);
    print_check(out, "order-2 bound       rho_contr_2    <= ((m+n)/2)pi   ",
                rep.bound_half);
    print_check(out, "period-spec bound   rho_{(m+n)/(2-a)} <= 2(m+n)pi/(2-a)^2",
                rep.bound_period);
    out << "\n";

    out << "tolerance ladder:\n";
    out << "  ode_rel_tol=" << cfg.numerics.ode_rel_tol
        << " ode_abs_tol=" << cfg.numerics.ode_abs_tol
        << " quad_rel_tol=" << cfg.numerics.quad_rel_tol
        << " quad_abs_tol=" << cfg.numerics.quad_abs_tol << "\n";
    out << "  eta_grid_n=" << cfg.numerics.eta_grid_n
        << " eta_margin=" << cfg.numerics.eta_margin
        << " time_cap_factor=" << cfg.numerics.time_cap_factor << "\n";
    out << "  at_bound_tol=" << cfg.numerics.at_bound_tol
        << " closure_tol=" << cfg.numerics.closure_tol
        << " max_closure_residual=" << res.max_closure_residual << "\n";
    out << "  note: meridian closure is assembled analytically; the ODE "
           "never crosses the cone points.\n";
}

void write_returns_csv(std::ostream& out, const AnalysisResult& res) {
    CsvWriter w(out);
    w.header({"eta", "tau", "delta_xi", "winding", "drift", "censored"});
    for (const auto& rd : res.returns)
        w.row(rd.eta, rd.tau, rd.delta_xi, rd.winding, rd.ode_drift,
              rd.censored);
}

void write_genfun_csv(std::ostream& out, const AnalysisResult& res) {
    CsvWriter w(out);
    w.header({"eta", "F", "Fp", "route", "valid"});
    for (std::size_t i = 0; i < res.G_int.eta.size(); ++i)
        w.row(res.G_int.eta[i], res.G_int.F[i], res.G_int.Fp[i],
              std::string("integral"), static_cast<bool>(res.G_int.valid[i]));
    for (std::size_t i = 0; i < res.G_ret.eta.size(); ++i)
        w.row(res.G_ret.eta[i], res.G_ret.F[i], res.G_ret.Fp[i],
              std::string("returns"), static_cast<bool>(res.G_ret.valid[i]));
}

void write_critical_csv(std::ostream& out, const AnalysisResult& res) {
    CsvWriter w(out);
    w.header({"eta0", "mu", "kind"});
    if (res.crit.all_critical) {
        w.row(std::string("all"), res.crit.mu, std::string("all_critical"));
        return;
    }
    for (const auto& c : res.crit.points) {
        const char* k = c.kind == CriticalPoint::Kind::Min   ? "min"
                        : c.kind == CriticalPoint::Kind::Max ? "max"
                                                             : "inflection";
        w.row(c.eta, c.mu, std::string(k));
    }
}

void write_geodesics_csv(std::ostream& out, const AnalysisResult& res) {
    CsvWriter w(out);
    w.header({"kind", "q", "iterate", "eta", "length", "total_winding",
              "class", "family", "closure_residual"});
    for (const auto& g : res.report.geodesics)
        w.row(std::string(kind_name(g.kind)), g.q, g.iterate,
              std::isnan(g.eta) ? 0.0 : g.eta, g.length, g.total_winding,
              g.homotopy.value, g.family, g.closure_residual);
}

void write_tau_csv(std::ostream& out, const AnalysisResult& res) {
    CsvWriter w(out);
    w.header({"k", "tau_k"});
    for (std::size_t i = 0; i < res.report.tau_seq.size(); ++i)
        w.row(static_cast<long>(i + 1), res.report.tau_seq[i]);
}

void write_ratios_csv(std::ostream& out, const AnalysisResult& res) {
    const auto& rep = res.report;
    CsvWriter w(out);
    w.header({"name", "value", "bound", "margin", "verdict"});
    w.row(std::string("rho_sys"), rep.rho_sys, 0.0, 0.0, std::string("-"));
    w.row(std::string("rho_contr"), rep.bound_contr.ratio,
          rep.bound_contr.bound, rep.bound_contr.margin,
          verdict_name(rep.bound_contr.verdict));
    if (rep.bound_half.applicable)
        w.row(std::string("rho_contr_2"), rep.bound_half.ratio,
              rep.bound_half.bound, rep.bound_half.margin,
              verdict_name(rep.bound_half.verdict));
    w.row(std::string("rho_periodspec"), rep.bound_period.ratio,
          rep.bound_period.bound, rep.bound_period.margin,
          verdict_name(rep.bound_period.verdict));
    w.row(std::string("rho_contact_lift"), rep.rho_contact_lift, 1.0, 0.0,
          std::string("-"));
}

void write_profile_csv(std::ostream& out, const MetricProfile& p, int n) {
    CsvWriter w(out);
    w.header({"s", "r", "dr"});
    for (int i = 0; i <= n; ++i) {
        const double s = p.M() * i / n;
        w.row(s, p.r(s), p.dr(s));
    }
}

void write_trajectory_csv(std::ostream& out, const MetricProfile& p,
                          const Trajectory& traj) {
    CsvWriter w(out);
    w.header({"t", "theta", "beta", "s", "K"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& x = traj.states[i];
        w.row(traj.times[i], x.theta, x.beta, x.s, clairaut(p, x));
    }
}

}  // namespace spindle
