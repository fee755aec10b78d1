#include <doctest.h>

#include <cmath>

#include "spindle/measure.hpp"
#include "spindle/util.hpp"
#include "oracles.hpp"

using namespace spindle;

TEST_CASE("areas of the basic families") {
    CHECK(area(make_round()) == doctest::Approx(4 * kPi).epsilon(1e-10));

    const MetricProfile b23 =
        make_besse(BesseSpec{OrbifoldSignature::make(2, 3), {0.2}});
    CHECK(area(b23) == doctest::Approx(10 * kPi).epsilon(1e-8));

    const MetricProfile b11 =
        make_besse(BesseSpec{OrbifoldSignature::make(1, 1), {0.1}});
    CHECK(area(b11) == doctest::Approx(4 * kPi).epsilon(1e-8));

    // independent Simpson route for the bumped profile
    const MetricProfile bump = perturb_band(make_round(), 1.1, 0.3, 0.08);
    const double oracle = oracles::simpson(
        [&](double s) { return 2 * kPi * bump.r(s); }, 0.0, bump.M(), 200000);
    CHECK(area(bump) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("pole deformation areas approach the sphere from below") {
    const MetricProfile base = make_round();
    const auto sig = OrbifoldSignature::make(2, 3);
    double prev = 0;
    for (double eps : {0.4, 0.2, 0.1}) {
        const double a = area(perturb_poles(base, sig, eps));
        CHECK(a < 4 * kPi);
        CHECK(a > prev);  // removing less area as eps shrinks
        prev = a;
    }
}

TEST_CASE("contact volume identities") {
    SUBCASE("round sphere, boundary region empty") {
        const MetricProfile p = make_round();
        CHECK(contact_volume_direct(p) ==
              doctest::Approx(8 * kPi * kPi).epsilon(1e-10));
        std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
        const GeneratingFunction G = genfun_from_integral(p, grid);
        const VolumeReport rep = contact_volume_decomposed(p, G);
        // 4 L int F - (m+n) L^2 = 16 pi^2 - 8 pi^2
        CHECK(rep.vol_decomposed ==
              doctest::Approx(8 * kPi * kPi).epsilon(1e-8));
        CHECK(rep.gamma_part == doctest::Approx(0.0));
        CHECK(rep.saturated_part ==
              doctest::Approx(8 * kPi * kPi).epsilon(1e-8));
        CHECK(rep.rel_mismatch < 1e-6);
    }
    SUBCASE("closed-geodesic family (2,3)") {
        const MetricProfile p =
            make_besse(BesseSpec{OrbifoldSignature::make(2, 3), {-0.2, 0.1}});
        CHECK(contact_volume_direct(p) ==
              doctest::Approx(20 * kPi * kPi).epsilon(1e-8));
        std::vector<double> grid{-1.0, -0.8, -0.4, 0.0, 0.4, 0.8, 1.0};
        const VolumeReport rep =
            contact_volume_decomposed(p, genfun_from_integral(p, grid));
        CHECK(rep.rel_mismatch < 1e-6);
    }
    SUBCASE("dumbbell with a nontrivial boundary region") {
        const MetricProfile p = perturb_band(make_round(), kPi / 2, 0.5, -0.3);
        std::vector<double> grid{-1.0, -0.8, -0.4, 0.0, 0.4, 0.8, 1.0};
        const VolumeReport rep =
            contact_volume_decomposed(p, genfun_from_integral(p, grid));
        CHECK(rep.gamma_part > 0.0);
        CHECK(rep.rel_mismatch < 1e-5);
        CHECK(rep.gamma_part > -1e-12);
    }
}

TEST_CASE("decomposed route requires the integral-route evaluator") {
    const MetricProfile p = make_round();
    GeneratingFunction G;
    G.route = GenfunRoute::FromReturnMap;
    CHECK_THROWS_AS(contact_volume_decomposed(p, G), Error);
}
