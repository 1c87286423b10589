#include "dsedit/dynselect.hpp"
#include "dsedit/edition.hpp"
#include "dsedit/fitness.hpp"
#include "dsedit/knn.hpp"
#include "dsedit/pool.hpp"
#include "dsedit/synth.hpp"

#include <benchmark/benchmark.h>

using namespace dsedit;

namespace {

Dataset banana(std::size_t n, std::uint64_t seed = 1) { return generate({SynthKind::Banana, n, 1.0, seed}); }

void BM_Knn(benchmark::State& state) {
    const auto ref = banana(static_cast<std::size_t>(state.range(0)));
    const auto queries = banana(256, 2);
    std::size_t q = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(knn(queries.row(q), ref, 7));
        q = (q + 1) % queries.size();
    }
}
BENCHMARK(BM_Knn)->Arg(250)->Arg(1000)->Arg(5000);

void BM_Fitness(benchmark::State& state) {
    const auto d = banana(static_cast<std::size_t>(state.range(0)));
    const FitnessEvaluator eval(d);
    SelectionMask mask(d.size(), true);
    for (std::size_t i = 0; i < d.size(); i += 3) mask.set(i, false);
    for (auto _ : state) benchmark::DoNotOptimize(eval(mask));
}
BENCHMARK(BM_Fitness)->Arg(250)->Arg(1000);

void BM_RngGraph(benchmark::State& state) {
    const auto d = banana(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_rng_graph(d));
}
BENCHMARK(BM_RngGraph)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DsPredict(benchmark::State& state) {
    const auto method = static_cast<DsMethod>(state.range(0));
    const auto dsel = banana(1000, 3);
    const auto test = banana(200, 4);
    const auto pool = build_cache(bagging_pool(banana(500, 5), 100, 1), dsel);
    for (auto _ : state) benchmark::DoNotOptimize(ds_predict_all(method, pool, dsel, test, 7));
    state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_DsPredict)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
