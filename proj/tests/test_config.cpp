#include <doctest.h>

#include <cstdlib>

#include "spindle/config.hpp"
#include "spindle/util.hpp"

using namespace spindle;

TEST_CASE("defaults and validation") {
    const RunConfig cfg = RunConfig::parse("{}");
    CHECK(cfg.metric.type == "round");
    CHECK(cfg.numerics.eta_grid_n == 401);
    CHECK(cfg.output.out_dir == "out");

    CHECK_THROWS_AS(RunConfig::parse(R"({"numerics":{"eta_grid_n":400}})"),
                    ConfigParse);
    CHECK_THROWS_AS(RunConfig::parse(R"({"numerics":{"ode_rel_tol":-1}})"),
                    ConfigParse);
    CHECK_THROWS_AS(RunConfig::parse(R"({"metric":{"type":"torus"}})"),
                    ConfigParse);
    CHECK_THROWS_AS(RunConfig::parse(R"({"metric":{"type":"round","m":2}})"),
                    ConfigParse);
    CHECK_THROWS_AS(RunConfig::parse("not json"), ConfigParse);
}

TEST_CASE("environment overrides") {
    setenv("SPINDLE_numerics_eta_grid_n", "51", 1);
    setenv("SPINDLE_metric_type", "besse", 1);
    setenv("SPINDLE_metric_m", "2", 1);
    setenv("SPINDLE_seed", "777", 1);
    const RunConfig cfg = RunConfig::parse("{}");
    unsetenv("SPINDLE_numerics_eta_grid_n");
    unsetenv("SPINDLE_metric_type");
    unsetenv("SPINDLE_metric_m");
    unsetenv("SPINDLE_seed");
    CHECK(cfg.numerics.eta_grid_n == 51);
    CHECK(cfg.metric.type == "besse");
    CHECK(cfg.metric.m == 2);
    CHECK(cfg.seed == 777);
}

TEST_CASE("profile construction from the metric block") {
    SUBCASE("round") {
        const MetricProfile p = build_profile(RunConfig::parse("{}").metric);
        CHECK(p.provenance() == Provenance::Round);
    }
    SUBCASE("besse") {
        const RunConfig cfg = RunConfig::parse(
            R"({"metric":{"type":"besse","m":2,"n":1,"h_coeffs":[0.1]}})");
        const MetricProfile p = build_profile(cfg.metric);
        CHECK(p.provenance() == Provenance::Besse);
        CHECK(p.M() == doctest::Approx(1.5 * kPi));
    }
    SUBCASE("perturbed with pole bands and a bump") {
        const RunConfig cfg = RunConfig::parse(
            R"({"metric":{"type":"perturbed","m":2,"n":3,"eps":0.2,
                "bump_center":1.1,"bump_width":0.2,"bump_amp":0.05}})");
        const MetricProfile p = build_profile(cfg.metric);
        CHECK(p.provenance() == Provenance::Perturbed);
        CHECK(p.signature().order == 5);
    }
    SUBCASE("perturbed without any modification is rejected") {
        const RunConfig cfg = RunConfig::parse(
            R"({"metric":{"type":"perturbed","m":2,"n":3}})");
        CHECK_THROWS_AS(build_profile(cfg.metric), ConfigParse);
    }
    SUBCASE("sampled") {
        const RunConfig cfg = RunConfig::parse(
            R"({"metric":{"type":"sampled","m":1,"n":1,
                "knots":[[0,0],[0.7853981633974483,0.7071067811865476],
                         [1.5707963267948966,1],
                         [2.356194490192345,0.7071067811865476],
                         [3.141592653589793,0]]}})");
        const MetricProfile p = build_profile(cfg.metric);
        CHECK(p.provenance() == Provenance::Sampled);
        CHECK(p.r(kPi / 2) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sweep parameter application") {
    const RunConfig cfg = RunConfig::parse(
        R"({"metric":{"type":"perturbed","m":2,"n":3,"eps":0.1},
            "sweep":{"parameter":"eps","values":[0.4,0.2]}})");
    REQUIRE(cfg.sweep.has_value());
    const MetricConfig mc = apply_sweep_value(cfg.metric, "eps", 0.4);
    CHECK(mc.eps == 0.4);
    const MetricConfig mh = apply_sweep_value(cfg.metric, "h_scale", 0.5);
    CHECK(mh.h_coeffs == cfg.metric.h_coeffs);
    CHECK_THROWS_AS(apply_sweep_value(cfg.metric, "zzz", 1.0), ConfigParse);
    CHECK_THROWS_AS(
        RunConfig::parse(R"({"sweep":{"parameter":"eps","values":[]}})"),
        ConfigParse);
}
