#include <doctest.h>

#include <cmath>

#include "spindle/systole.hpp"
#include "spindle/util.hpp"

using namespace spindle;

namespace {

AnalysisNumerics fast_numerics() {
    AnalysisNumerics num;
    num.eta_grid_n = 65;
    num.jobs = 2;
    return num;
}

}  // namespace

TEST_CASE("round sphere report") {
    const MetricProfile p = make_round();
    const AnalysisResult res = analyze(p, fast_numerics());
    const auto& rep = res.report;

    CHECK(rep.area == doctest::Approx(4 * kPi).epsilon(1e-9));
    CHECK(rep.L == doctest::Approx(2 * kPi).epsilon(1e-9));
    CHECK(rep.l_min == doctest::Approx(2 * kPi).epsilon(1e-8));
    // contractible lift needs the doubled great circle
    CHECK(rep.l_min_contr == doctest::Approx(4 * kPi).epsilon(1e-8));
    CHECK(rep.rho_contr == doctest::Approx(4 * kPi).epsilon(1e-7));
    CHECK(rep.rho_sys == doctest::Approx(kPi).epsilon(1e-7));
    CHECK(rep.bound_contr.verdict == Verdict::AtBound);
    CHECK(rep.bound_half.verdict == Verdict::AtBound);
    CHECK(rep.bound_period.verdict == Verdict::AtBound);
    CHECK(rep.besse_flat);
    // family at the common length saturates the sequence immediately
    REQUIRE(rep.tau_seq.size() == 1);
    CHECK(rep.tau_seq[0] == doctest::Approx(2 * kPi).epsilon(1e-8));
    CHECK(rep.rho_contact_lift == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("closed-geodesic family (2,1): lengths, sequence, equality") {
    const MetricProfile p =
        make_besse(BesseSpec{OrbifoldSignature::make(2, 1), {0.15}});
    const AnalysisResult res = analyze(p, fast_numerics());
    const auto& rep = res.report;

    // common period of non-equator geodesics: 2 (m+n) pi / (2-alpha) = 6 pi
    bool found_family = false;
    for (const auto& g : rep.geodesics) {
        if (g.family && g.kind == GeodesicKind::Oscillating) {
            CHECK(g.length == doctest::Approx(6 * kPi).epsilon(1e-7));
            CHECK(g.total_winding == 3);
            CHECK(g.homotopy.value == 0);
            found_family = true;
        }
    }
    CHECK(found_family);

    // tau_k: equator iterates below the common period, then saturation
    REQUIRE(rep.tau_seq.size() == 3);  // (m+n)/(2-alpha) = 3
    CHECK(rep.tau_seq[0] == doctest::Approx(2 * kPi).epsilon(1e-8));
    CHECK(rep.tau_seq[1] == doctest::Approx(4 * kPi).epsilon(1e-8));
    CHECK(rep.tau_seq[2] == doctest::Approx(6 * kPi).epsilon(1e-7));

    CHECK(rep.l_min_contr == doctest::Approx(6 * kPi).epsilon(1e-7));
    CHECK(rep.rho_contr == doctest::Approx(6 * kPi).epsilon(1e-6));
    CHECK(rep.bound_contr.verdict == Verdict::AtBound);
    CHECK(rep.bound_period.verdict == Verdict::AtBound);
    CHECK(!rep.bound_half.applicable);  // m+n odd
}

TEST_CASE("closed-geodesic family (1,3): order-2 subgroup minimum") {
    const MetricProfile p =
        make_besse(BesseSpec{OrbifoldSignature::make(1, 3), {}});
    const AnalysisResult res = analyze(p, fast_numerics());
    const auto& rep = res.report;
    // shortest lift in the order-2 subgroup: (m+n) pi
    CHECK(rep.l_min_k.at(2) == doctest::Approx(4 * kPi).epsilon(1e-7));
    CHECK(rep.rho_contr_2 == doctest::Approx(2 * kPi).epsilon(1e-6));
    CHECK(rep.bound_half.verdict == Verdict::AtBound);
    // contractible: 2(m+n) pi
    CHECK(rep.l_min_contr == doctest::Approx(8 * kPi).epsilon(1e-7));
}

TEST_CASE("perturbed spindle: strict inequalities and short geodesics") {
    const MetricProfile p =
        perturb_poles(make_round(), OrbifoldSignature::make(2, 3), 0.2);
    const AnalysisResult res = analyze(p, fast_numerics());
    const auto& rep = res.report;

    CHECK(!rep.besse_flat);
    // flatness detection separates cleanly: non-closed families sit well
    // above ten times the constancy threshold
    CHECK((res.G_ret.max_valid_F() - res.G_ret.min_valid_F()) / rep.L > 1e-5);
    CHECK(rep.bound_contr.verdict == Verdict::BelowBound);
    CHECK(rep.bound_contr.margin > 1e-3);
    CHECK(rep.bound_period.verdict == Verdict::BelowBound);
    // the winding layer produces geodesics shorter than the equator
    CHECK(rep.l_min < rep.L);
    // every re-integrated closure is tight
    CHECK(res.max_closure_residual < 1e-6);
    // route agreement on a genuinely non-flat profile
    CHECK(res.route_max_dev < 1e-5 * rep.L);
    CHECK(res.winding_identity_dev < 1e-5 * rep.L);
}

TEST_CASE("bumped sphere: contractible geodesic below the doubled equator") {
    const MetricProfile p = perturb_band(make_round(), 0.9, 0.35, -0.12);
    const AnalysisResult res = analyze(p, fast_numerics());
    const auto& rep = res.report;
    CHECK(rep.l_min_contr < 4 * kPi - 1e-3);
    CHECK(rep.bound_contr.verdict == Verdict::BelowBound);
    CHECK(rep.bound_half.verdict == Verdict::BelowBound);
}

TEST_CASE("l_min_in_class cutoff certification") {
    const MetricProfile p = make_round();
    const AnalysisResult res = analyze(p, fast_numerics());
    CHECK_THROWS_AS(l_min_in_class(res.report.geodesics,
                                   p.signature(), 1, 0.5),
                    CutoffTooSmall);
}

TEST_CASE("tau sequence general contract") {
    const MetricProfile p =
        perturb_poles(make_round(), OrbifoldSignature::make(2, 3), 0.3);
    const AnalysisResult res = analyze(p, fast_numerics());
    const auto& rep = res.report;
    CHECK(rep.tau_seq.front() == doctest::Approx(rep.l_min).epsilon(1e-9));
    for (std::size_t i = 0; i + 1 < rep.tau_seq.size(); ++i)
        CHECK(rep.tau_seq[i] <= rep.tau_seq[i + 1] + 1e-12);
}

TEST_CASE("grid too coarse without an exact evaluator") {
    const MetricProfile p =
        perturb_poles(make_round(), OrbifoldSignature::make(2, 3), 0.2);
    const Annulus ann = make_annulus(p);
    GridOptions go;
    const auto rg = return_grid(p, 17, go);
    // spec-signature route: no pointwise evaluator available for refinement
    const GeneratingFunction G =
        genfun_from_returns(rg, p.signature(), ann.L);
    CHECK_THROWS_AS(
        enumerate_closed(p, ann, G, rg, 3 * 5 * ann.L, 2, {}),
        GridTooCoarse);
}

TEST_CASE("analyze rejects an even grid") {
    AnalysisNumerics num;
    num.eta_grid_n = 64;
    CHECK_THROWS_AS(analyze(make_round(), num), ConfigParse);
}
