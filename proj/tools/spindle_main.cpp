// Command-line front end: analyze | geodesic | besse-gen | sweep | verify.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "spindle/battery.hpp"
#include "spindle/config.hpp"
#include "spindle/csv.hpp"
#include "spindle/report.hpp"
#include "spindle/systole.hpp"
#include "spindle/util.hpp"

namespace fs = std::filesystem;
using namespace spindle;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    unsigned jobs = 0;
    double cutoff = 0;
    int qmax = 0;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg = args.config_path.empty() ? RunConfig::parse("{}")
                                             : RunConfig::load(args.config_path);
    if (!args.out_dir.empty()) cfg.output.out_dir = args.out_dir;
    if (args.jobs > 0) cfg.jobs = args.jobs;
    if (args.cutoff > 0) cfg.numerics.length_cutoff = args.cutoff;
    if (args.qmax > 0) cfg.numerics.q_max = args.qmax;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--jobs", args.jobs, "worker threads (default: hardware)");
    cmd->add_option("--cutoff", args.cutoff, "length cutoff override");
    cmd->add_option("--qmax", args.qmax, "max returns per closure override");
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot open " + (dir / name).string());
    return out;
}

int run_analyze_once(const RunConfig& cfg, const fs::path& out_dir) {
    const MetricProfile p = build_profile(cfg.metric);
    const AnalysisResult res = analyze(p, cfg.analysis_numerics());

    {
        auto out = open_out(out_dir, "report.txt");
        write_report(out, p, res, cfg);
    }
    if (cfg.output.emit_csv) {
        { auto o = open_out(out_dir, "returns.csv"); write_returns_csv(o, res); }
        { auto o = open_out(out_dir, "genfun.csv"); write_genfun_csv(o, res); }
        { auto o = open_out(out_dir, "critical.csv"); write_critical_csv(o, res); }
        { auto o = open_out(out_dir, "geodesics.csv"); write_geodesics_csv(o, res); }
        { auto o = open_out(out_dir, "tau_seq.csv"); write_tau_csv(o, res); }
        { auto o = open_out(out_dir, "ratios.csv"); write_ratios_csv(o, res); }
        { auto o = open_out(out_dir, "profile.csv"); write_profile_csv(o, p, 2000); }
    }

    const int code = exit_code_for(res.report);
    std::cout << "analyze: S^2(" << cfg.metric.m << "," << cfg.metric.n << ") "
              << cfg.metric.type << "  rho_contr=" << res.report.rho_contr
              << "  verdicts: contr=" << verdict_name(res.report.bound_contr.verdict);
    if (res.report.bound_half.applicable)
        std::cout << " order2=" << verdict_name(res.report.bound_half.verdict);
    std::cout << " period=" << verdict_name(res.report.bound_period.verdict)
              << "\nreport: " << (out_dir / "report.txt").string() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic flow and systolic ratios on rotationally "
                 "symmetric spindle orbifolds"};
    app.require_subcommand(1);

    CommonArgs a_analyze, a_geodesic, a_besse, a_sweep, a_verify;

    auto* cmd_analyze =
        app.add_subcommand("analyze", "full pipeline: flow, return map, "
                                      "generating function, ratios, verdicts");
    add_common(cmd_analyze, a_analyze);

    auto* cmd_geodesic =
        app.add_subcommand("geodesic", "integrate one geodesic, emit CSV");
    add_common(cmd_geodesic, a_geodesic);
    double g_eta = -0.5, g_tmax = 0, g_beta = -10, g_s0 = -1;
    cmd_geodesic->add_option("--eta", g_eta,
                             "launch height on the annulus (-1,1)");
    cmd_geodesic->add_option("--beta", g_beta, "launch angle (overrides --eta)");
    cmd_geodesic->add_option("--s0", g_s0, "launch s (default: equator)");
    cmd_geodesic->add_option("--tmax", g_tmax, "integration time (default 10L)");

    auto* cmd_besse_gen = app.add_subcommand(
        "besse-gen", "emit the sampled radial profile of a closed-geodesic "
                     "family metric");
    add_common(cmd_besse_gen, a_besse);
    int bg_samples = 2000;
    cmd_besse_gen->add_option("--samples", bg_samples, "sample count");

    auto* cmd_sweep = app.add_subcommand(
        "sweep", "run analyze across a one-parameter family");
    add_common(cmd_sweep, a_sweep);
    std::string sw_param;
    std::vector<double> sw_values;
    cmd_sweep->add_option("--param", sw_param, "eps | bump_amp | h_scale");
    cmd_sweep->add_option("--values", sw_values, "parameter values");

    auto* cmd_verify = app.add_subcommand(
        "verify", "run the built-in verification battery, print a pass/fail "
                  "table");
    add_common(cmd_verify, a_verify);
    int v_grid = 201;
    cmd_verify->add_option("--grid", v_grid, "eta grid size for the battery");
    bool v_quiet = false;
    cmd_verify->add_flag("--quiet", v_quiet, "suppress progress lines");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_analyze->parsed()) {
            const RunConfig cfg = load_config(a_analyze);
            return run_analyze_once(cfg, cfg.output.out_dir);
        }

        if (cmd_geodesic->parsed()) {
            const RunConfig cfg = load_config(a_geodesic);
            const MetricProfile p = build_profile(cfg.metric);
            const Annulus ann = make_annulus(p);
            PhasePoint x0;
            x0.s = g_s0 > 0 ? g_s0 : ann.s0;
            x0.beta = g_beta > -9 ? g_beta : std::acos(-g_eta);
            const double tmax = g_tmax > 0 ? g_tmax : 10.0 * ann.L;
            IntegrateOptions io;
            io.rel_tol = cfg.numerics.ode_rel_tol;
            io.abs_tol = cfg.numerics.ode_abs_tol;
            const Trajectory traj = integrate(p, x0, tmax, io);
            auto out = open_out(cfg.output.out_dir, "trajectory.csv");
            write_trajectory_csv(out, p, traj);
            std::cout << "geodesic: " << traj.times.size() << " samples, "
                      << "clairaut drift " << traj.clairaut_drift << "\n";
            return 0;
        }

        if (cmd_besse_gen->parsed()) {
            const RunConfig cfg = load_config(a_besse);
            const auto sig = OrbifoldSignature::make(cfg.metric.m, cfg.metric.n);
            const MetricProfile p =
                make_besse(BesseSpec{sig, cfg.metric.h_coeffs});
            auto out = open_out(cfg.output.out_dir, "besse_profile.csv");
            write_profile_csv(out, p, bg_samples);
            std::cout << "besse-gen: S^2(" << sig.m << "," << sig.n
                      << "), M=" << p.M() << ", equator length "
                      << p.equator_length() << "\n";
            return 0;
        }

        if (cmd_sweep->parsed()) {
            RunConfig cfg = load_config(a_sweep);
            std::string param = sw_param;
            std::vector<double> values = sw_values;
            if (param.empty() && cfg.sweep) {
                param = cfg.sweep->parameter;
                values = cfg.sweep->values;
            }
            if (param.empty() || values.empty())
                throw ConfigParse("sweep needs --param/--values or a config "
                                  "sweep block");
            auto out = open_out(cfg.output.out_dir, "sweep.csv");
            CsvWriter w(out);
            w.header({"param", "area", "L", "l_min", "l_min_contr",
                      "rho_sys", "rho_contr", "rho_contr_2", "rho_periodspec",
                      "margin_contr", "margin_half", "margin_period"});
            int worst = 0;
            for (double v : values) {
                RunConfig run = cfg;
                run.metric = apply_sweep_value(cfg.metric, param, v);
                const MetricProfile p = build_profile(run.metric);
                const AnalysisResult res = analyze(p, run.analysis_numerics());
                const auto& rep = res.report;
                w.row(v, rep.area, rep.L, rep.l_min, rep.l_min_contr,
                      rep.rho_sys, rep.rho_contr, rep.rho_contr_2,
                      rep.rho_periodspec, rep.bound_contr.margin,
                      rep.bound_half.applicable ? rep.bound_half.margin : 0.0,
                      rep.bound_period.margin);
                worst = std::max(worst, exit_code_for(rep));
                std::cout << param << "=" << v << " rho_sys=" << rep.rho_sys
                          << " rho_contr=" << rep.rho_contr << "\n";
            }
            std::cout << "sweep: " << (fs::path(cfg.output.out_dir) / "sweep.csv").string()
                      << "\n";
            return worst;
        }

        if (cmd_verify->parsed()) {
            const RunConfig cfg = load_config(a_verify);
            BatteryOptions bo;
            bo.eta_grid_n = v_grid;
            bo.jobs = cfg.jobs;
            bo.seed = cfg.seed;
            const auto results =
                run_battery(bo, v_quiet ? nullptr : &std::cerr);
            bool all = true;
            for (const auto& r : results) {
                std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
                          << ": " << r.detail << "\n";
                all = all && r.pass;
            }
            std::cout << (all ? "verify: all checks passed\n"
                              : "verify: FAILURES present\n");
            return all ? 0 : 1;
        }
    } catch (const ConfigParse& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
