#include <benchmark/benchmark.h>

#include "suprec/decoders.hpp"
#include "suprec/experiments.hpp"
#include "suprec/rng.hpp"
#include "suprec/signal_model.hpp"
#include "suprec/tail_bounds.hpp"
#include "suprec/thresholds.hpp"

using namespace suprec;

namespace {

void BM_PhiloxU64(benchmark::State& state) {
    Rng rng(1, 0);
    std::uint64_t acc = 0;
    for (auto _ : state) acc ^= rng.next_u64();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PhiloxU64);

void BM_Gaussian(benchmark::State& state) {
    Rng rng(1, 0);
    double acc = 0.0;
    for (auto _ : state) acc += rng.gaussian();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Gaussian);

void BM_DrawMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(2, 0);
    for (auto _ : state) {
        auto mat = draw_matrix(n, 4 * n, 1.0, rng);
        benchmark::DoNotOptimize(mat.a.data());
    }
    state.SetItemsProcessed(state.iterations() * n * 4 * n);
}
BENCHMARK(BM_DrawMatrix)->Arg(32)->Arg(128);

void BM_COfW(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    SignalValues w;
    w.w = Eigen::VectorXd::LinSpaced(k, 0.5, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(c_of_w(w, 1.0, 1.0).bits);
}
BENCHMARK(BM_COfW)->Arg(8)->Arg(16)->Arg(20);

void BM_BuildGrid(benchmark::State& state) {
    const double zeta = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto grid = build_grid(1.5, zeta, 2);
        benchmark::DoNotOptimize(grid.points.data());
        state.counters["points"] = static_cast<double>(grid.size());
    }
}
BENCHMARK(BM_BuildGrid)->Arg(10)->Arg(40);

struct PlantedTrial {
    MeasurementMatrix mat;
    Eigen::VectorXd y;
};

PlantedTrial plant(int m, int n, int k, double sz2, std::uint64_t seed) {
    PlantedTrial t;
    Rng mrng(seed, 1);
    t.mat = draw_matrix(n, m, 1.0, mrng);
    SignalValues w;
    w.w = Eigen::VectorXd::Constant(k, 1.0);
    Rng srng(seed, 0);
    const auto support = draw_support(m, k, srng);
    Rng nrng(seed, 2);
    t.y = measure(t.mat, assemble_signal(w, support, m), {NoiseKind::gaussian, sz2}, nrng);
    return t;
}

void BM_DistanceDecodeK1(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(std::ceil(std::log2(m) / 0.35));
    const auto trial = plant(m, n, 1, 1.0, 7);
    const auto params = default_decoder_params(1.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(distance_decode_k1(trial.y, trial.mat, params, 1.0).residual);
}
BENCHMARK(BM_DistanceDecodeK1)->Arg(1024)->Arg(4096);

void BM_DistanceDecodeK2(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(std::ceil(std::log2(m) / 0.30));
    const auto trial = plant(m, n, 2, 1.0, 8);
    auto params = default_decoder_params(1.0, 1.0);
    params.epsilon = 0.05;
    params.zeta = 0.05;
    params.work_cap = 1e10;
    for (auto _ : state)
        benchmark::DoNotOptimize(distance_decode(trial.y, trial.mat, 2, params, 1.0).residual);
}
BENCHMARK(BM_DistanceDecodeK2)->Arg(64)->Arg(256);

void BM_MlDecode(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto trial = plant(m, 40, 2, 0.5, 9);
    for (auto _ : state)
        benchmark::DoNotOptimize(ml_decode(trial.y, trial.mat, 2).residual);
}
BENCHMARK(BM_MlDecode)->Arg(64)->Arg(256);

void BM_OmpDecode(benchmark::State& state) {
    const auto trial = plant(256, 40, 2, 0.5, 10);
    for (auto _ : state)
        benchmark::DoNotOptimize(omp_decode(trial.y, trial.mat, 2).residual);
}
BENCHMARK(BM_OmpDecode);

void BM_EmpiricalTail(benchmark::State& state) {
    const TailQuery q{50, 1.0, 0.125, 0.875 / 2.0, 1.0};
    for (auto _ : state) {
        const auto est = empirical_tail(q, UProfile::constant, 10000, 3, 1);
        benchmark::DoNotOptimize(est.prob.count);
    }
    state.SetItemsProcessed(state.iterations() * 10000 * 50);
}
BENCHMARK(BM_EmpiricalTail);

} // namespace

BENCHMARK_MAIN();
