#include <benchmark/benchmark.h>

#include <random>

#include "lpvembed/baseline.hpp"
#include "lpvembed/fixtures.hpp"
#include "lpvembed/model.hpp"
#include "lpvembed/simulate.hpp"

using namespace lpv;

namespace {

Matrix random_cloud(int dim, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Matrix m(dim, count);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < count; ++j) m(i, j) = dist(rng);
    return m;
}

void bench_build_series(benchmark::State& state) {
    const Fixture fx = fixture("example1");
    const TrajectoryDataset data = fx.default_dataset();
    for (auto _ : state) benchmark::DoNotOptimize(build_series(fx.system, data));
}
BENCHMARK(bench_build_series);

void bench_decompose(benchmark::State& state) {
    const Fixture fx = fixture("example1");
    const CoefficientSeries series = build_series(fx.system, fx.default_dataset());
    const Normalizer nrm = fit_normalizer(series);
    const Matrix normalized = normalize(nrm, series);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(normalized));
}
BENCHMARK(bench_decompose);

void bench_min_area_rectangle(benchmark::State& state) {
    const Matrix pts = random_cloud(2, static_cast<int>(state.range(0)), 11);
    for (auto _ : state) benchmark::DoNotOptimize(min_area_rectangle(pts));
}
BENCHMARK(bench_min_area_rectangle)->Arg(1000)->Arg(10000);

void bench_min_volume_box3(benchmark::State& state) {
    const Matrix pts = random_cloud(3, static_cast<int>(state.range(0)), 13);
    for (auto _ : state) benchmark::DoNotOptimize(min_volume_box3(pts, 0.05));
}
BENCHMARK(bench_min_volume_box3)->Arg(200)->Arg(1000);

void bench_mvee(benchmark::State& state) {
    const Matrix pts = random_cloud(static_cast<int>(state.range(0)), 200, 17);
    for (auto _ : state) benchmark::DoNotOptimize(mvee(pts, 1e-6));
}
BENCHMARK(bench_mvee)->Arg(2)->Arg(4)->Arg(6);

void bench_embed_end_to_end(benchmark::State& state) {
    const Fixture fx = fixture("example1");
    const TrajectoryDataset data = fx.default_dataset();
    for (auto _ : state) {
        const CoefficientSeries series = build_series(fx.system, data);
        const Normalizer nrm = fit_normalizer(series);
        const ReducedBasis basis = truncate(decompose(normalize(nrm, series)), 2);
        const Matrix rho = reduced_coordinates(basis, nrm, series);
        const SchedulingRegion region = region_from_points(rho, RegionStrategy::Box);
        benchmark::DoNotOptimize(assemble(basis, nrm, region));
    }
}
BENCHMARK(bench_embed_end_to_end);

void bench_simulate_lpv(benchmark::State& state) {
    const Fixture fx = fixture("example2");
    const CoefficientSeries series = build_series(fx.system, fx.default_dataset());
    const Normalizer nrm = fit_normalizer(series);
    const ReducedBasis basis = truncate(decompose(normalize(nrm, series)), 2);
    const SchedulingRegion region =
        region_from_points(reduced_coordinates(basis, nrm, series), RegionStrategy::AxisAligned);
    const AffineLpvModel model = assemble(basis, nrm, region);
    Vector x0(2);
    x0 << 1.0, 0.0;
    const Matrix input = Matrix::Zero(1000, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_lpv(model, fx.system, x0, input, 1e-3, 1000));
}
BENCHMARK(bench_simulate_lpv);

}  // namespace

BENCHMARK_MAIN();
