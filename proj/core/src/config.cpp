#include "spindle/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spindle/errors.hpp"

extern char** environ;

namespace spindle {

using nlohmann::json;

namespace {

void merge_env_overrides(json& j) {
    // SPINDLE_<section>_<key>=<json value>; section names carry no
    // underscore, so the first '_' after the prefix splits section from key.
    // Top-level scalars use SPINDLE_seed / SPINDLE_jobs.
    const std::string prefix = "SPINDLE_";
    for (char** e = environ; e && *e; ++e) {
        const std::string entry(*e);
        if (entry.rfind(prefix, 0) != 0) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        const std::string path = entry.substr(prefix.size(), eq - prefix.size());
        const std::string value = entry.substr(eq + 1);

        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::exception&) {
            parsed = value;  // raw strings allowed unquoted
        }

        const auto us = path.find('_');
        if (us == std::string::npos) {
            j[path] = parsed;
        } else {
            const std::string section = path.substr(0, us);
            const std::string key = path.substr(us + 1);
            if (section == "metric" || section == "numerics" ||
                section == "output" || section == "sweep") {
                j[section][key] = parsed;
            } else {
                j[path] = parsed;
            }
        }
    }
}

template <typename T>
void get_to_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

RunConfig from_json(json j) {
    merge_env_overrides(j);

    RunConfig cfg;
    try {
        if (j.contains("metric")) {
            const auto& m = j.at("metric");
            get_to_if(m, "type", cfg.metric.type);
            get_to_if(m, "m", cfg.metric.m);
            get_to_if(m, "n", cfg.metric.n);
            get_to_if(m, "h_coeffs", cfg.metric.h_coeffs);
            get_to_if(m, "base_type", cfg.metric.base_type);
            get_to_if(m, "eps", cfg.metric.eps);
            get_to_if(m, "bump_center", cfg.metric.bump_center);
            get_to_if(m, "bump_width", cfg.metric.bump_width);
            get_to_if(m, "bump_amp", cfg.metric.bump_amp);
            if (m.contains("knots")) {
                for (const auto& k : m.at("knots")) {
                    cfg.metric.knots.emplace_back(k.at(0).get<double>(),
                                                  k.at(1).get<double>());
                }
            }
        }
        if (j.contains("numerics")) {
            const auto& n = j.at("numerics");
            get_to_if(n, "eta_grid_n", cfg.numerics.eta_grid_n);
            get_to_if(n, "eta_margin", cfg.numerics.eta_margin);
            get_to_if(n, "ode_rel_tol", cfg.numerics.ode_rel_tol);
            get_to_if(n, "ode_abs_tol", cfg.numerics.ode_abs_tol);
            get_to_if(n, "quad_rel_tol", cfg.numerics.quad_rel_tol);
            get_to_if(n, "quad_abs_tol", cfg.numerics.quad_abs_tol);
            get_to_if(n, "time_cap_factor", cfg.numerics.time_cap_factor);
            get_to_if(n, "q_max", cfg.numerics.q_max);
            get_to_if(n, "length_cutoff", cfg.numerics.length_cutoff);
            get_to_if(n, "closure_tol", cfg.numerics.closure_tol);
            get_to_if(n, "at_bound_tol", cfg.numerics.at_bound_tol);
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            get_to_if(o, "out_dir", cfg.output.out_dir);
            get_to_if(o, "emit_csv", cfg.output.emit_csv);
        }
        if (j.contains("sweep")) {
            SweepConfig sw;
            j.at("sweep").at("parameter").get_to(sw.parameter);
            j.at("sweep").at("values").get_to(sw.values);
            cfg.sweep = sw;
        }
        get_to_if(j, "jobs", cfg.jobs);
        get_to_if(j, "seed", cfg.seed);
    } catch (const json::exception& e) {
        throw ConfigParse(e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParse("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigParse(std::string("invalid JSON: ") + e.what());
    }
    return from_json(std::move(j));
}

RunConfig RunConfig::parse(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigParse(std::string("invalid JSON: ") + e.what());
    }
    return from_json(std::move(j));
}

void RunConfig::validate() const {
    if (numerics.eta_grid_n < 16)
        throw ConfigParse("numerics.eta_grid_n must be >= 16");
    if (numerics.eta_grid_n % 2 == 0)
        throw ConfigParse("numerics.eta_grid_n must be odd (grid contains 0)");
    for (const auto& [name, v] :
         {std::pair<const char*, double>{"ode_rel_tol", numerics.ode_rel_tol},
          {"ode_abs_tol", numerics.ode_abs_tol},
          {"quad_rel_tol", numerics.quad_rel_tol},
          {"quad_abs_tol", numerics.quad_abs_tol},
          {"time_cap_factor", numerics.time_cap_factor},
          {"closure_tol", numerics.closure_tol},
          {"at_bound_tol", numerics.at_bound_tol},
          {"eta_margin", numerics.eta_margin}}) {
        if (!(v > 0))
            throw ConfigParse(std::string("numerics.") + name +
                              " must be positive");
    }
    if (metric.type != "round" && metric.type != "besse" &&
        metric.type != "perturbed" && metric.type != "sampled")
        throw ConfigParse("metric.type must be round|besse|perturbed|sampled");
    if (metric.m < 1 || metric.n < 1)
        throw ConfigParse("metric.m and metric.n must be positive integers");
    if (metric.type == "round" && (metric.m != 1 || metric.n != 1))
        throw ConfigParse("round metric has m = n = 1");
    if (sweep) {
        if (sweep->parameter != "eps" && sweep->parameter != "bump_amp" &&
            sweep->parameter != "h_scale")
            throw ConfigParse("sweep.parameter must be eps|bump_amp|h_scale");
        if (sweep->values.empty())
            throw ConfigParse("sweep.values must be nonempty");
    }
}

AnalysisNumerics RunConfig::analysis_numerics() const {
    AnalysisNumerics num;
    num.eta_grid_n = numerics.eta_grid_n;
    num.eta_margin = numerics.eta_margin;
    num.ode_rel_tol = numerics.ode_rel_tol;
    num.ode_abs_tol = numerics.ode_abs_tol;
    num.quad_rel_tol = numerics.quad_rel_tol;
    num.quad_abs_tol = numerics.quad_abs_tol;
    num.time_cap_factor = numerics.time_cap_factor;
    num.q_max = numerics.q_max;
    num.length_cutoff = numerics.length_cutoff;
    num.closure_tol = numerics.closure_tol;
    num.at_bound_tol = numerics.at_bound_tol;
    num.jobs = jobs > 0 ? jobs : std::thread::hardware_concurrency();
    return num;
}

MetricProfile build_profile(const MetricConfig& mc) {
    const auto sig = OrbifoldSignature::make(mc.m, mc.n);
    if (mc.type == "round") return make_round();
    if (mc.type == "besse") return make_besse(BesseSpec{sig, mc.h_coeffs});
    if (mc.type == "sampled") return make_sampled(sig, mc.knots);
    if (mc.type == "perturbed") {
        MetricProfile base =
            (mc.base_type == "besse")
                ? make_besse(BesseSpec{sig, mc.h_coeffs})
                : make_round();
        std::optional<MetricProfile> out;
        if (mc.eps > 0) out = perturb_poles(base, sig, mc.eps);
        if (mc.bump_width > 0) {
            out = perturb_band(out ? *out : base, mc.bump_center,
                               mc.bump_width, mc.bump_amp);
        }
        if (!out)
            throw ConfigParse(
                "perturbed metric needs eps > 0 and/or bump_width > 0");
        return *out;
    }
    throw ConfigParse("unknown metric.type " + mc.type);
}

MetricConfig apply_sweep_value(const MetricConfig& mc,
                               const std::string& parameter, double value) {
    MetricConfig out = mc;
    if (parameter == "eps") {
        out.eps = value;
    } else if (parameter == "bump_amp") {
        out.bump_amp = value;
    } else if (parameter == "h_scale") {
        for (auto& c : out.h_coeffs) c *= value;
    } else {
        throw ConfigParse("unknown sweep parameter " + parameter);
    }
    return out;
}

}  // namespace spindle
