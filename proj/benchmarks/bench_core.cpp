#include <benchmark/benchmark.h>

#include <cmath>

#include "spindle/annulus.hpp"
#include "spindle/genfun.hpp"
#include "spindle/measure.hpp"
#include "spindle/profile.hpp"
#include "spindle/systole.hpp"

using namespace spindle;

namespace {

const MetricProfile& besse21() {
    static const MetricProfile p =
        make_besse(BesseSpec{OrbifoldSignature::make(2, 1), {0.15}});
    return p;
}

const MetricProfile& spindle23() {
    static const MetricProfile p =
        perturb_poles(make_round(), OrbifoldSignature::make(2, 3), 0.2);
    return p;
}

void BM_ProfileEval(benchmark::State& state) {
    const MetricProfile& p = besse21();
    double s = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.r(s));
        benchmark::DoNotOptimize(p.dr(s));
        s += 1e-4;
        if (s > p.M() - 0.1) s = 0.1;
    }
}
BENCHMARK(BM_ProfileEval);

void BM_FirstReturnRound(benchmark::State& state) {
    const MetricProfile p = make_round();
    const Annulus ann = make_annulus(p);
    for (auto _ : state)
        benchmark::DoNotOptimize(first_return(p, ann, -0.5));
}
BENCHMARK(BM_FirstReturnRound);

void BM_FirstReturnSpindle(benchmark::State& state) {
    const MetricProfile& p = spindle23();
    const Annulus ann = make_annulus(p);
    for (auto _ : state)
        benchmark::DoNotOptimize(first_return(p, ann, -0.5));
}
BENCHMARK(BM_FirstReturnSpindle);

void BM_GenfunIntegralPoint(benchmark::State& state) {
    const MetricProfile& p = spindle23();
    std::vector<double> grid{-0.5};
    for (auto _ : state)
        benchmark::DoNotOptimize(genfun_from_integral(p, grid));
}
BENCHMARK(BM_GenfunIntegralPoint);

void BM_Area(benchmark::State& state) {
    const MetricProfile& p = besse21();
    for (auto _ : state) benchmark::DoNotOptimize(area(p));
}
BENCHMARK(BM_Area);

void BM_ReturnGrid(benchmark::State& state) {
    const MetricProfile& p = besse21();
    GridOptions go;
    go.jobs = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(return_grid(p, 65, go));
}
BENCHMARK(BM_ReturnGrid)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
