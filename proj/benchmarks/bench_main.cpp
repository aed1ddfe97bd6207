#include <benchmark/benchmark.h>

#include <vector>

#include "mqsr/chernoff.hpp"
#include "mqsr/decoders.hpp"
#include "mqsr/lasso.hpp"
#include "mqsr/model.hpp"
#include "mqsr/rng.hpp"

using namespace mqsr;

static void BM_FillNormal(benchmark::State& state) {
    const rng::CounterStream stream(rng::derive_key(1, 0));
    std::vector<double> buf(static_cast<std::size_t>(state.range(0)));
    std::uint64_t first = 0;
    for (auto _ : state) {
        stream.fill_normal(first, buf);
        first += buf.size();
        benchmark::DoNotOptimize(buf.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillNormal)->Arg(1 << 10)->Arg(1 << 16);

static void BM_ExhaustiveScan(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const std::size_t s = 4;
    std::vector<std::size_t> support{0, 1, 2, 3};
    const auto truth = SparseSignal::binary(p, support);
    const auto ds = generate_dataset(truth, {10, 10, 0.5, 2.0}, 7);
    for (auto _ : state) {
        auto r = decoders::decode_exhaustive(ds, s, decoders::Objective::Agnostic);
        benchmark::DoNotOptimize(r.loss);
    }
}
BENCHMARK(BM_ExhaustiveScan)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_LassoSolve(benchmark::State& state) {
    const std::size_t p = 512, n = static_cast<std::size_t>(state.range(0));
    std::vector<std::size_t> support{3, 50, 100, 150, 200, 250, 300, 400};
    std::vector<double> values{1, -1, 1, -1, 1, -1, 1, -1};
    const auto truth = SparseSignal::make(p, support, values);
    const auto ds = generate_dataset(truth, {n / 2, n - n / 2, 0.1, 0.4}, 11);
    lasso::LassoConfig cfg;
    cfg.lambda = 0.2;
    for (auto _ : state) {
        auto sol = lasso::solve_lasso(ds, cfg);
        benchmark::DoNotOptimize(sol.beta.data());
    }
}
BENCHMARK(BM_LassoSolve)->Arg(54)->Arg(218)->Unit(benchmark::kMillisecond);

static void BM_EmpiricalMisrank(benchmark::State& state) {
    std::vector<std::size_t> truth_support{0, 1, 2, 3};
    const auto truth = SparseSignal::binary(6, truth_support);
    const std::vector<std::size_t> cand{0, 1, 4, 5};
    for (auto _ : state) {
        auto est = chernoff::empirical_misrank(truth, {8, 8, 0.5, 2.0}, cand, chernoff::Setting::Agnostic,
                                               static_cast<std::size_t>(state.range(0)), 3, 1);
        benchmark::DoNotOptimize(est.estimate);
    }
}
BENCHMARK(BM_EmpiricalMisrank)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
