#include <benchmark/benchmark.h>

#include "lexseq/lex.hpp"
#include "lexseq/lmm.hpp"
#include "lexseq/online_pst.hpp"
#include "lexseq/synthetic.hpp"
#include "lexseq/weighted_majority.hpp"

using namespace lexseq;

namespace {

void BM_WmRunDeskPool(benchmark::State& state) {
    const SyntheticData train = gen_synthetic({20, 50, 100, 3});
    const SyntheticData test = gen_synthetic({20, 1, 100, 4});
    TrainConfig cfg;
    cfg.experts = 2;
    cfg.depth_cap = 5;
    TrainResult result = train_lex(train.dataset, cfg);
    augment_pool(result.pool, train.dataset, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wm_run(result.pool.span(), test.dataset.sequences[0]));
    }
}
BENCHMARK(BM_WmRunDeskPool);

void BM_TrainLexDesk(benchmark::State& state) {
    const SyntheticData train =
        gen_synthetic({20, static_cast<int>(state.range(0)), 100, 5});
    TrainConfig cfg;
    cfg.experts = 2;
    cfg.depth_cap = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_lex(train.dataset, cfg));
    }
}
BENCHMARK(BM_TrainLexDesk)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_LmmFitDesk(benchmark::State& state) {
    const SyntheticData train = gen_synthetic({20, 50, 100, 7});
    LmmFitOptions opt;
    opt.components = 2;
    opt.order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lmm_em_fit(train.dataset, opt));
    }
}
BENCHMARK(BM_LmmFitDesk)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_OnlinePst(benchmark::State& state) {
    const SyntheticData test = gen_synthetic({20, 1, 100, 9});
    OnlinePstConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(online_pst_run(test.dataset.sequences[0], 20, cfg));
    }
}
BENCHMARK(BM_OnlinePst);

}  // namespace

BENCHMARK_MAIN();
