#include <benchmark/benchmark.h>

#include <cmath>

#include "hle/grid.hpp"
#include "hle/lane_emden.hpp"
#include "hle/spectral.hpp"

namespace {

hle::DomainPtr disk(int k) {
    return hle::build_domain(hle::ShapeSpec::ball(2, {0, 0, 0}, 1.0), std::pow(2.0, -k));
}

void BM_LaplacianApply(benchmark::State& state) {
    hle::DomainPtr dom = disk(static_cast<int>(state.range(0)));
    hle::ScalarField u = hle::constant_field(dom, 1.0);
    hle::ScalarField y(dom);
    for (auto _ : state) {
        hle::laplacian_apply_raw(*dom, u.values.data(), y.values.data());
        benchmark::DoNotOptimize(y.values.data());
    }
    state.SetItemsProcessed(state.iterations() * dom->node_count());
}
BENCHMARK(BM_LaplacianApply)->Arg(5)->Arg(6)->Arg(7);

void BM_PoissonSolve(benchmark::State& state) {
    hle::DomainPtr dom = disk(static_cast<int>(state.range(0)));
    hle::ScalarField f = hle::constant_field(dom, 1.0);
    for (auto _ : state) {
        hle::ScalarField u = hle::solve_poisson(f, 1e-10);
        benchmark::DoNotOptimize(u.values.data());
    }
}
BENCHMARK(BM_PoissonSolve)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_LaneEmdenSolve(benchmark::State& state) {
    hle::DomainPtr dom = disk(5);
    for (auto _ : state) {
        auto d = hle::solve_lane_emden(dom, 1.5, 1e-8);
        benchmark::DoNotOptimize(d.residual);
    }
}
BENCHMARK(BM_LaneEmdenSolve)->Unit(benchmark::kMillisecond);

void BM_PrincipalEigenvalue(benchmark::State& state) {
    hle::DomainPtr dom = disk(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto r = hle::principal_eigenvalue(dom, 1e-8);
        benchmark::DoNotOptimize(r.eigenvalue);
    }
}
BENCHMARK(BM_PrincipalEigenvalue)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Lambda2Gamma(benchmark::State& state) {
    hle::DomainPtr dom = disk(5);
    for (auto _ : state) {
        double v = hle::lambda_2gamma(dom, 1.5, 1e-7);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_Lambda2Gamma)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
