#include <doctest.h>

#include <cmath>

#include "spindle/annulus.hpp"
#include "spindle/genfun.hpp"
#include "spindle/util.hpp"
#include "oracles.hpp"

using namespace spindle;

namespace {

std::vector<double> small_grid() {
    return chebyshev_symmetric_grid(33, 1e-3);
}

}  // namespace

TEST_CASE("round sphere: F is constant 2 pi by the integral route") {
    const MetricProfile p = make_round();
    std::vector<double> grid = small_grid();
    grid.insert(grid.begin(), -1.0);
    grid.push_back(1.0);
    const GeneratingFunction G = genfun_from_integral(p, grid);

    CHECK(G.f_eval(0.0) == doctest::Approx(2 * kPi).epsilon(1e-12));
    for (std::size_t i = 0; i < G.eta.size(); ++i)
        CHECK(G.F[i] == doctest::Approx(2 * kPi).epsilon(1e-9));
    // the boundary region is degenerate: F(1) = (m+n) L / 2 = 2 pi
    CHECK(G.endpoint_value == doctest::Approx(2 * kPi).epsilon(1e-12));

    // independent check of the reduced area integral at one interior height
    const double eta = 0.5;
    const double s1 = std::asin(eta), s2 = kPi - std::asin(eta);
    const double integral = oracles::simpson(
        [&](double s) {
            const double q = 1.0 - eta * eta / (std::sin(s) * std::sin(s));
            return 2.0 * std::sqrt(std::max(0.0, q));
        },
        s1, s2, 400000);
    CHECK(G.f_eval(eta) ==
          doctest::Approx(integral + 2 * kPi * eta).epsilon(1e-6));
}

TEST_CASE("round sphere: returns route gives the same constant") {
    const MetricProfile p = make_round();
    const auto grid = return_grid(p, 33, {});
    const GeneratingFunction G =
        genfun_from_returns(p, make_annulus(p), grid);
    for (std::size_t i = 0; i < G.eta.size(); ++i) {
        CHECK(G.F[i] == doctest::Approx(2 * kPi).epsilon(1e-9));
        CHECK(std::abs(G.Fp[i]) < 1e-7);
    }
}

TEST_CASE("closed-geodesic family: flat F and agreeing routes") {
    const MetricProfile p =
        make_besse(BesseSpec{OrbifoldSignature::make(2, 3), {0.15, -0.1}});
    const Annulus ann = make_annulus(p);
    GridOptions go;
    go.jobs = 2;
    const auto rg = return_grid(p, 33, go);
    const GeneratingFunction Gr = genfun_from_returns(p, ann, rg);

    std::vector<double> grid;
    for (const auto& rd : rg) grid.push_back(rd.eta);
    const GeneratingFunction Gi = genfun_from_integral(p, grid);

    const double L = ann.L;
    const double target = (2 + 3) * kPi;  // (m+n) pi
    for (std::size_t i = 0; i < Gr.eta.size(); ++i) {
        CHECK(std::abs(Gr.F[i] - target) < 1e-6 * L);
        CHECK(std::abs(Gi.F[i] - Gr.F[i]) < 1e-5 * L);
    }
    CHECK((Gr.max_valid_F() - Gr.min_valid_F()) / L < 1e-6);
    // meridian entry: F(0) = tau(0) = 2M
    CHECK(Gr.f_eval(0.0) == doctest::Approx(2 * p.M()).epsilon(1e-12));
    // endpoint value for the unique-maximum equator: (m+n) L / 2
    CHECK(Gi.endpoint_value == doctest::Approx(0.5 * 5 * L).epsilon(1e-9));
}

TEST_CASE("tau identity between the integral route and return data") {
    const MetricProfile p = perturb_band(make_round(), 1.1, 0.3, 0.08);
    const auto rg = return_grid(p, 33, {});
    std::vector<double> grid;
    for (const auto& rd : rg) grid.push_back(rd.eta);
    const GeneratingFunction Gi = genfun_from_integral(p, grid);
    const double L = p.equator_length();
    for (std::size_t i = 0; i < rg.size(); ++i) {
        if (rg[i].censored) continue;
        CHECK(std::abs(Gi.F[i] - Gi.eta[i] * Gi.Fp[i] - rg[i].tau) <
              1e-6 * L);
    }
}

TEST_CASE("strict lower bound F > (m+n) L |eta| / 2") {
    const MetricProfile p =
        perturb_poles(make_round(), OrbifoldSignature::make(2, 3), 0.3);
    std::vector<double> grid = small_grid();
    grid.insert(grid.begin(), -1.0);
    grid.push_back(1.0);
    const GeneratingFunction G = genfun_from_integral(p, grid);
    const int order = p.signature().order;
    for (std::size_t i = 0; i < G.eta.size(); ++i) {
        const double bound = 0.5 * order * G.L * std::abs(G.eta[i]);
        if (std::abs(G.eta[i]) < 1.0)
            CHECK(G.F[i] > bound);  // strict on the open interval
        else
            CHECK(G.F[i] >= bound - 1e-12);  // weak at the endpoints
    }
}

TEST_CASE("critical points: all-critical flag and interior minimum") {
    SUBCASE("round is numerically constant") {
        const MetricProfile p = make_round();
        const auto rg = return_grid(p, 33, {});
        const GeneratingFunction G =
            genfun_from_returns(p, make_annulus(p), rg);
        const CriticalSet cs = critical_points(G);
        CHECK(cs.all_critical);
        CHECK(cs.mu == doctest::Approx(2 * kPi).epsilon(1e-9));
    }
    SUBCASE("bumped sphere has an interior minimum below 2 pi") {
        const MetricProfile p = perturb_band(make_round(), 0.9, 0.35, -0.12);
        const auto rg = return_grid(p, 65, {});
        const GeneratingFunction G =
            genfun_from_returns(p, make_annulus(p), rg);
        const CriticalSet cs = critical_points(G);
        REQUIRE(!cs.all_critical);
        // eta = 0 is always critical (F' is odd)
        bool has_zero = false, has_deep_min = false;
        for (const auto& cp : cs.points) {
            if (std::abs(cp.eta) < 1e-9) has_zero = true;
            if (cp.kind == CriticalPoint::Kind::Min && cp.mu < 2 * kPi - 1e-3)
                has_deep_min = true;
        }
        CHECK(has_zero);
        CHECK(has_deep_min);
    }
}

TEST_CASE("returns-route oddness violation is rejected") {
    const auto sig = OrbifoldSignature::make(1, 1);
    std::vector<ReturnData> rds;
    for (double eta : {-0.5, 0.0, 0.5}) {
        ReturnData rd;
        rd.eta = eta;
        rd.tau = 2 * kPi;
        rd.winding = 1.0 + (eta > 0 ? 0.3 : 0.0);  // breaks oddness of F'
        rds.push_back(rd);
    }
    CHECK_THROWS_AS(genfun_from_returns(rds, sig, 2 * kPi),
                    InconsistentData);
}

TEST_CASE("boundary-region slice integral") {
    const MetricProfile round = make_round();
    const std::function<double(double)> one = [](double) { return 1.0; };
    CHECK(gamma_slice_integral(round, one) == doctest::Approx(0.0));
    const MetricProfile dumb = perturb_band(make_round(), kPi / 2, 0.5, -0.3);
    CHECK(gamma_slice_integral(dumb, one) > 0.1);
}
