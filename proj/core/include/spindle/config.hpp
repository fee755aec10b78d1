#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spindle/profile.hpp"
#include "spindle/systole.hpp"

namespace spindle {

/// Metric block of the run configuration. `type` selects the family:
///   round      unit sphere (m = n = 1)
///   besse      closed-geodesic family for (m, n) with coefficients h_coeffs
///   perturbed  base (round or besse) with a pole modification of width eps
///              toward signature (m, n) and/or a compactly supported bump
///   sampled    monotone C^1 interpolation of (s, r) knots
struct MetricConfig {
    std::string type = "round";
    int m = 1;
    int n = 1;
    std::vector<double> h_coeffs;
    std::string base_type = "round";
    double eps = 0;
    double bump_center = 0;
    double bump_width = 0;
    double bump_amp = 0;
    std::vector<std::pair<double, double>> knots;
};

struct NumericsConfig {
    int eta_grid_n = 401;
    double eta_margin = 1e-3;
    double ode_rel_tol = 1e-11;
    double ode_abs_tol = 1e-13;
    double quad_rel_tol = 1e-10;
    double quad_abs_tol = 1e-12;
    double time_cap_factor = 50;
    int q_max = 0;             ///< 0 = default 2(2-alpha)
    double length_cutoff = 0;  ///< 0 = default 3(m+n)L
    double closure_tol = 1e-6;
    double at_bound_tol = 1e-4;
};

struct OutputConfig {
    std::string out_dir = "out";
    bool emit_csv = true;
};

struct SweepConfig {
    std::string parameter;  ///< eps | bump_amp | h_scale
    std::vector<double> values;
};

struct RunConfig {
    MetricConfig metric;
    NumericsConfig numerics;
    OutputConfig output;
    std::optional<SweepConfig> sweep;
    unsigned jobs = 0;  ///< 0 = hardware concurrency
    std::uint64_t seed = 12345;

    /// Parse a JSON config file, then apply SPINDLE_* environment overrides.
    /// Throws ConfigParse on grammar or invariant violations.
    static RunConfig load(const std::string& path);

    /// Parse from a JSON string (used for defaults/overrides and tests).
    static RunConfig parse(const std::string& json_text);

    void validate() const;

    AnalysisNumerics analysis_numerics() const;
};

/// Construct the profile described by the metric block.
MetricProfile build_profile(const MetricConfig& mc);

/// Re-apply one sweep parameter value to a metric block.
MetricConfig apply_sweep_value(const MetricConfig& mc,
                               const std::string& parameter, double value);

}  // namespace spindle
