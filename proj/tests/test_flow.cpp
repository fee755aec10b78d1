#include <doctest.h>

#include <cmath>
#include <random>

#include "spindle/dopri5.hpp"
#include "spindle/flow.hpp"
#include "spindle/util.hpp"
#include "oracles.hpp"

using namespace spindle;

TEST_CASE("clairaut function values") {
    const MetricProfile p = make_round();
    CHECK(clairaut(p, {0, 0, kPi / 2}) == doctest::Approx(1.0));
    CHECK(clairaut(p, {0, kPi / 2, kPi / 3}) == doctest::Approx(0.0));
    CHECK(clairaut(p, {0, kPi / 4, kPi / 2}) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("dopri5 dense output against a closed form") {
    // y' = cos t, y(0) = 0; dense output must reproduce sin t到 high order
    auto rhs = [](double t, const std::array<double, 1>&,
                  std::array<double, 1>& dy) { dy[0] = std::cos(t); };
    Dopri5<1, decltype(rhs)> stepper(rhs, 1e-11, 1e-13);
    stepper.start(0.0, {0.0});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (stepper.t() < 10.0) {
        stepper.step(10.0);
        const auto& d = stepper.dense();
        for (int k = 0; k < 4; ++k) {
            const double th = u(rng);
            const double y = d.eval(th)[0];
            CHECK(std::abs(y - std::sin(d.t0 + th * d.h)) < 5e-10);
        }
    }
    CHECK(stepper.y()[0] == doctest::Approx(std::sin(10.0)).epsilon(1e-10));
}

TEST_CASE("great circle against the closed form") {
    const MetricProfile p = make_round();
    const oracles::GreatCircle gc{kPi / 4};
    const PhasePoint x0{0, kPi / 4, kPi / 2};
    IntegrateOptions io;
    const Trajectory tr = integrate(p, x0, 2 * kPi, io);
    // final state returns to the start after one period
    const PhasePoint xf = tr.states.back();
    CHECK(std::abs(xf.theta - 2 * kPi) < 1e-8);
    CHECK(std::abs(xf.beta - kPi / 4) < 1e-8);
    CHECK(std::abs(xf.s - kPi / 2) < 1e-8);
    // every sample matches the R^3 closed form
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(oracles::GreatCircle::embed_distance(
                  tr.states[i], gc.position(tr.times[i])) < 1e-8);
    }
    CHECK(tr.clairaut_drift < 1e-9);
}

TEST_CASE("equator orbit stays put") {
    const MetricProfile p = make_round();
    const Trajectory tr = integrate(p, {0, 0, kPi / 2}, 2 * kPi, {});
    for (const auto& x : tr.states) {
        CHECK(std::abs(x.s - kPi / 2) < 1e-9);
        CHECK(std::abs(x.beta) < 1e-9);
    }
    CHECK(tr.states.back().theta == doctest::Approx(2 * kPi).epsilon(1e-10));
}

TEST_CASE("conservation and monotone winding for random orbits") {
    const MetricProfile p = make_round();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> us(0.2, kPi - 0.2);
    std::uniform_real_distribution<double> ub(0.0, 2 * kPi);
    const double L = p.equator_length();
    int done = 0;
    while (done < 10) {
        const PhasePoint x0{0, ub(rng), us(rng)};
        if (std::abs(clairaut(p, x0)) < 0.05) continue;
        const Trajectory tr = integrate(p, x0, 10 * L, {});
        CHECK(tr.clairaut_drift < 1e-9);
        // theta-monotonicity: cos(beta) keeps its sign along the orbit
        const double sign0 = std::cos(tr.states.front().beta) > 0 ? 1 : -1;
        for (const auto& x : tr.states)
            CHECK(sign0 * std::cos(x.beta) > 0.0);
        ++done;
    }
}

TEST_CASE("unit speed identity on stored samples") {
    const MetricProfile p = make_round();
    const Trajectory tr = integrate(p, {0, 0.6, 1.0}, 7.0, {});
    for (const auto& x : tr.states) {
        const double r = p.r(x.s);
        const double thdot = std::cos(x.beta) / r;
        const double sdot = std::sin(x.beta);
        CHECK(std::abs(r * r * thdot * thdot + sdot * sdot - 1.0) < 1e-9);
    }
}

TEST_CASE("oscillation band and confinement") {
    const MetricProfile p = make_round();
    const PhasePoint x0{0, kPi / 4, kPi / 2};
    const OrbitClass c = classify(p, x0);
    REQUIRE(std::holds_alternative<Oscillating>(c));
    const auto osc = std::get<Oscillating>(c);
    // sin s1 = sin s2 = cos(pi/4)
    CHECK(osc.s1 == doctest::Approx(kPi / 4).epsilon(1e-9));
    CHECK(osc.s2 == doctest::Approx(3 * kPi / 4).epsilon(1e-9));
    const Trajectory tr = integrate(p, x0, 20.0, {});
    for (const auto& x : tr.states) {
        CHECK(x.s > osc.s1 - 1e-7);
        CHECK(x.s < osc.s2 + 1e-7);
    }
}

TEST_CASE("time reversal returns to the start") {
    const MetricProfile p = make_round();
    const PhasePoint x0{0, 0.9, 1.1};
    const Trajectory fwd = integrate(p, x0, 5.0, {});
    PhasePoint xr = fwd.states.back();
    xr.beta += kPi;  // reverse the velocity
    const Trajectory bwd = integrate(p, xr, 5.0, {});
    PhasePoint xb = bwd.states.back();
    xb.beta -= kPi;
    CHECK(std::abs(std::remainder(xb.theta - x0.theta, 2 * kPi)) < 1e-7);
    CHECK(std::abs(std::remainder(xb.beta - x0.beta, 2 * kPi)) < 1e-7);
    CHECK(std::abs(xb.s - x0.s) < 1e-7);
}

TEST_CASE("classification of meridional and equatorial orbits") {
    const MetricProfile p = make_round();
    CHECK(std::holds_alternative<Meridional>(classify(p, {0, kPi / 2, kPi / 3})));
    CHECK(std::holds_alternative<Equatorial>(classify(p, {0, 0, kPi / 2})));
}

TEST_CASE("asymptotic versus ambiguous classification on a dumbbell") {
    const MetricProfile dumb = perturb_band(make_round(), kPi / 2, 0.5, -0.3);
    const double r_neck = dumb.equators().minimal().radius;

    // |K| exactly at the neck level: asymptotic, both limits at the neck
    {
        const double s_launch = 1.0;  // in the lower bulge flank
        const double beta = std::acos(r_neck / dumb.r(s_launch));
        const OrbitClass c = classify(dumb, {0, beta, s_launch});
        REQUIRE(std::holds_alternative<Asymptotic>(c));
        CHECK(std::get<Asymptotic>(c).s_plus ==
              doctest::Approx(kPi / 2).epsilon(1e-6));
    }

    // |K| within a coarse tolerance of the neck level: refused
    {
        const double s_launch = 1.0;
        const double beta = std::acos((r_neck - 1e-3) / dumb.r(s_launch));
        ClassifyOptions co;
        co.amb_tol = 1e-2;
        CHECK_THROWS_AS(classify(dumb, {0, beta, s_launch}, co),
                        ToleranceAmbiguity);
        // with a tight threshold the band resolves across the neck
        co.amb_tol = 1e-8;
        const OrbitClass c = classify(dumb, {0, beta, s_launch}, co);
        REQUIRE(std::holds_alternative<Oscillating>(c));
        const auto osc = std::get<Oscillating>(c);
        CHECK(osc.s1 < 1.0);
        CHECK(osc.s2 > kPi / 2);  // the band spans the neck
    }

    // long-time oracle: the exactly-critical orbit creeps onto the neck.
    // The window must end before integration noise, amplified along the
    // separatrix like e^{lambda t}, kicks the orbit across the saddle.
    {
        const double s_launch = 1.0;
        const double beta = std::acos(r_neck / dumb.r(s_launch));
        const Trajectory tr = integrate(dumb, {0, beta, s_launch}, 8.0, {});
        const double d_mid =
            std::abs(tr.states[tr.states.size() / 2].s - kPi / 2);
        const double d_end = std::abs(tr.states.back().s - kPi / 2);
        CHECK(d_end < 0.05);
        CHECK(d_end < d_mid);
    }
}

TEST_CASE("near-meridian orbits truncate at the pole guard") {
    const MetricProfile p = make_round();
    const PhasePoint x0{0, kPi / 2 + 1e-9, kPi / 2};  // |K| ~ 1e-9
    const Trajectory tr = integrate(p, x0, 20.0, {});
    REQUIRE(!tr.events.empty());
    CHECK(tr.events.back().kind == EventKind::PolePassage);
    CHECK(tr.times.back() < 20.0);
}

TEST_CASE("step failure surfaces as the dedicated error") {
    const MetricProfile p = make_round();
    IntegrateOptions io;
    io.max_steps = 3;
    CHECK_THROWS_AS(integrate(p, {0, 0.8, 1.0}, 100.0, io), StepFailure);
}
