#include "anosov/directions.hpp"
#include "anosov/ergodic.hpp"
#include "anosov/foliation.hpp"
#include "anosov/lyapunov.hpp"
#include "anosov/random.hpp"

#include <benchmark/benchmark.h>

using namespace anosov;

namespace {

SmoothEndo shear(double eps)
{
    std::vector<ShearMap> s;
    if (eps != 0.0) s.push_back({0, 1, eps, 1, 0.0});
    return SmoothEndo(analyze(make_int_mat({{3, 1}, {1, 1}})), s);
}

void BM_Apply(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    TorusPoint x{0.1234, 0.5678};
    for (auto _ : state) {
        x = f.apply(x);
        if (x[0] == 0.0 && x[1] == 0.0) x = TorusPoint{0.1234, 0.5678};
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_Apply);

void BM_Derivative(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    const TorusPoint x{0.1234, 0.5678};
    for (auto _ : state) benchmark::DoNotOptimize(f.derivative(x));
}
BENCHMARK(BM_Derivative);

void BM_Preimages(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(f.preimages(TorusPoint{uniform01(rng), uniform01(rng)}));
}
BENCHMARK(BM_Preimages);

void BM_InverseLift(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    const CoverPoint q{3.7, -1.2};
    for (auto _ : state) benchmark::DoNotOptimize(f.inverse_lift(q));
}
BENCHMARK(BM_InverseLift);

void BM_UnstableDirection(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    const auto p = random_prehistory(f, TorusPoint{0.3, 0.6}, static_cast<int>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(unstable_direction(f, p));
}
BENCHMARK(BM_UnstableDirection)->Arg(10)->Arg(40);

void BM_RandomPrehistory(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(random_prehistory(f, TorusPoint{0.3, 0.6}, 40, ++seed));
}
BENCHMARK(BM_RandomPrehistory);

void BM_UnstableLyapunov(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    const auto p = random_prehistory(f, TorusPoint{0.3, 0.6}, 40, 5);
    for (auto _ : state) benchmark::DoNotOptimize(unstable_lyapunov(f, p, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UnstableLyapunov)->Arg(1000)->Arg(20000);

void BM_Census(benchmark::State& state)
{
    const SmoothEndo f = shear(0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(census(f, TorusPoint{0.3, 0.6}, CensusMode::sampled(200, 40, 9), kDefaultClusterTolerance, 1));
    }
}
BENCHMARK(BM_Census)->Unit(benchmark::kMillisecond);

void BM_TraceLeaf(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    for (auto _ : state) benchmark::DoNotOptimize(trace_leaf(f, CoverPoint{0.3, 0.7}, 5.0));
}
BENCHMARK(BM_TraceLeaf)->Unit(benchmark::kMillisecond);

void BM_BackwardWalk(benchmark::State& state)
{
    const SmoothEndo f = shear(0.02);
    ErgodicityConfig cfg;
    cfg.starts = 1;
    cfg.steps = 10000;
    cfg.conservativity_points = 1;
    cfg.threads = 1;
    const std::vector<Observable> obs{Observable::cosine(make_int_vec({1, 0}))};
    for (auto _ : state) benchmark::DoNotOptimize(ergodicity_test(f, obs, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_BackwardWalk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
