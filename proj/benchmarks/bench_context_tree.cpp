#include <benchmark/benchmark.h>

#include "lexseq/context_tree.hpp"
#include "lexseq/losses.hpp"
#include "lexseq/rng.hpp"

using namespace lexseq;

namespace {

Sequence random_sequence(Rng& rng, int k, std::size_t len) {
    Sequence s;
    s.symbols.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
        s.symbols.push_back(static_cast<Symbol>(1 + uniform_below(rng, static_cast<std::uint64_t>(k))));
    return s;
}

ContextTreeModel grown_model(int k, int cap, int updates) {
    Rng rng(7);
    ContextTreeModel model(k, PenaltyProfile::quadratic(), cap);
    std::vector<double> g(static_cast<std::size_t>(k));
    for (int u = 0; u < updates; ++u) {
        const Sequence prefix = random_sequence(rng, k, uniform_below(rng, 12));
        for (double& v : g) v = 2.0 * uniform01(rng) - 1.0;
        model.apply_update(prefix.symbols, g, 0.1);
    }
    return model;
}

void BM_PredictScores(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const ContextTreeModel model = grown_model(k, 5, 2000);
    Rng rng(11);
    const Sequence prefix = random_sequence(rng, k, 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.predict_scores(prefix.symbols));
    }
}
BENCHMARK(BM_PredictScores)->Arg(20)->Arg(200);

void BM_ApplyUpdateProject(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    Rng rng(13);
    ContextTreeModel model(k, PenaltyProfile::quadratic(), 5);
    const Sequence prefix = random_sequence(rng, k, 64);
    std::vector<double> g(static_cast<std::size_t>(k), 0.01);
    for (auto _ : state) {
        model.apply_update(prefix.symbols, g, 0.01);
        model.project_to_ball(5.0);
    }
}
BENCHMARK(BM_ApplyUpdateProject)->Arg(20)->Arg(200);

void BM_LogLossGrad(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    Rng rng(17);
    std::vector<double> z(static_cast<std::size_t>(k));
    for (double& v : z) v = 2.0 * uniform01(rng) - 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_loss_grad(z, 1));
    }
}
BENCHMARK(BM_LogLossGrad)->Arg(20)->Arg(200);

void BM_SequenceLoss(benchmark::State& state) {
    const int k = 20;
    const ContextTreeModel model = grown_model(k, 5, 2000);
    Rng rng(19);
    const Sequence x = random_sequence(rng, k, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sequence_loss(model, x, LossKind::LogLoss));
    }
}
BENCHMARK(BM_SequenceLoss)->Arg(100)->Arg(250);

}  // namespace
