#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "geoflow/data.hpp"
#include "geoflow/heat.hpp"
#include "geoflow/hmflow.hpp"
#include "geoflow/norms.hpp"
#include "geoflow/spectral.hpp"

using namespace geoflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Field sphere_map(const GridSpec& g, double alpha) {
    data::FamilyParams p;
    p.alpha = alpha;
    return data::sphere_data("angle_modes", p, g, 1);
}

void BM_ForwardInverse(benchmark::State& state) {
    const GridSpec g(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), kTwoPi);
    const Field f = sphere_map(g, 0.5);
    for (auto _ : state) {
        Field back = spectral::inverse(spectral::forward(f));
        benchmark::DoNotOptimize(back);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.sites()) * f.components());
}

void BM_HeatSemigroup(benchmark::State& state) {
    const GridSpec g(2, static_cast<int>(state.range(0)), kTwoPi);
    const Field f = sphere_map(g, 0.5);
    for (auto _ : state) {
        Field out = heat::heat_semigroup(f, 0.1);
        benchmark::DoNotOptimize(out);
    }
}

void BM_CaloricExtension(benchmark::State& state) {
    const GridSpec g(2, static_cast<int>(state.range(0)), kTwoPi);
    const Field f = sphere_map(g, 0.5);
    const TimeLadder ladder(0.25, static_cast<int>(state.range(1)));
    for (auto _ : state) {
        SpaceTimeField out = heat::caloric_extension(f, ladder);
        benchmark::DoNotOptimize(out);
    }
}

void BM_XNorm(benchmark::State& state) {
    const GridSpec g(2, static_cast<int>(state.range(0)), kTwoPi);
    const SpaceTimeField u = heat::caloric_extension(sphere_map(g, 0.5), TimeLadder(0.25, 32));
    for (auto _ : state) {
        auto report = norms::x_norm(u);
        benchmark::DoNotOptimize(report);
    }
}

void BM_BmoSeminorm(benchmark::State& state) {
    const GridSpec g(2, static_cast<int>(state.range(0)), kTwoPi);
    const Field f = sphere_map(g, 0.5);
    for (auto _ : state) {
        auto report = norms::bmo_seminorm(f, kTwoPi / 8.0);
        benchmark::DoNotOptimize(report);
    }
}

void BM_PicardMap(benchmark::State& state) {
    const GridSpec g(2, static_cast<int>(state.range(0)), kTwoPi);
    const Field u0 = sphere_map(g, 0.2);
    const SpaceTimeField u = heat::caloric_extension(u0, TimeLadder(0.25, static_cast<int>(state.range(1))));
    for (auto _ : state) {
        SpaceTimeField next = hmflow::picard_map(u, u0);
        benchmark::DoNotOptimize(next);
    }
}

void BM_SolveHmf(benchmark::State& state) {
    const GridSpec g(2, static_cast<int>(state.range(0)), kTwoPi);
    const Field u0 = sphere_map(g, 0.2);
    const hmflow::SolverConfig cfg{g, TimeLadder(0.25, 64)};
    for (auto _ : state) {
        auto res = hmflow::solve_hmf(u0, cfg);
        benchmark::DoNotOptimize(res);
    }
}

}  // namespace

BENCHMARK(BM_ForwardInverse)->Args({1, 256})->Args({2, 64})->Args({3, 16});
BENCHMARK(BM_HeatSemigroup)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_CaloricExtension)->Args({64, 64})->Args({64, 256});
BENCHMARK(BM_XNorm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BmoSeminorm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PicardMap)->Args({32, 64})->Args({64, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveHmf)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
