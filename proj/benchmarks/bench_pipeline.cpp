#include <benchmark/benchmark.h>

#include "gadforge/encoder.hpp"
#include "gadforge/metrics.hpp"
#include "gadforge/objective.hpp"
#include "gadforge/optimizer.hpp"
#include "gadforge/planted_benchmark.hpp"
#include "gadforge/trainer.hpp"

namespace gadforge {
namespace {

// Default planted benchmark, shared by every case.
const Dataset& dataset() {
  static const Dataset ds = gen_benchmark(BenchmarkConfig{}, 0);
  return ds;
}

const WeakSplit& split() {
  static const WeakSplit s = make_weak_split(dataset().graph, dataset().labels, 30, 0.01, SplitRatios{}, 0);
  return s;
}

void BM_Encode(benchmark::State& state) {
  const auto params = init_model<float>(TrainConfig{}.shape(dataset().graph.dim()), 0);
  for (auto _ : state) benchmark::DoNotOptimize(encode(dataset().graph, params.weights.encoder));
}
BENCHMARK(BM_Encode)->Unit(benchmark::kMillisecond);

void BM_InjectAll(benchmark::State& state) {
  Rng rng(0, "benchmark");
  for (auto _ : state)
    benchmark::DoNotOptimize(inject_all(dataset().graph, split().unlabeled_pool, PerturbConfig{}, rng));
}
BENCHMARK(BM_InjectAll)->Unit(benchmark::kMillisecond);

// One full-phase epoch: injection, both encodings, backward and Adam.
void BM_FullEpoch(benchmark::State& state) {
  const TrainConfig cfg;
  auto params = init_model<float>(cfg.shape(dataset().graph.dim()), 0);
  TrainStreams streams(0);
  for (auto _ : state) {
    Injection inj = inject_all(dataset().graph, split().unlabeled_pool, cfg.perturb, streams.synthetic);
    const auto synth = sample_synth_batches(inj.ledger, split(), streams.synthetic);
    const RealBatch real = sample_real_batch(split(), streams.batch, cfg.real_batch);
    ObjectiveSpec spec{&real, synth, cfg.lambda, cfg.specialized_heads};
    GradSet<float> grad = Weights<float>::zeros(params.shape);
    benchmark::DoNotOptimize(evaluate_objective<float>(dataset().graph, &inj.graph, params.weights, spec, &grad));
    adam_step(params, grad, cfg.adam());
  }
}
BENCHMARK(BM_FullEpoch)->Unit(benchmark::kMillisecond);

void BM_Auroc(benchmark::State& state) {
  Rng rng(1, "benchmark");
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  std::vector<int> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform();
    labels[i] = i % 20 == 0 ? 1 : 0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(auroc(scores, labels));
    benchmark::DoNotOptimize(auprc(scores, labels));
  }
}
BENCHMARK(BM_Auroc)->Arg(100)->Arg(10000);

}  // namespace
}  // namespace gadforge

BENCHMARK_MAIN();
