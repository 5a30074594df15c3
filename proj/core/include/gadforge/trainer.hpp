#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gadforge/checkpoint.hpp"
#include "gadforge/metrics.hpp"
#include "gadforge/objective.hpp"
#include "gadforge/optimizer.hpp"

namespace gadforge {

struct TrainConfig {
  std::size_t warmup_epochs = 100;  // N_warm
  std::size_t epochs = 200;         // N
  double lr = 0.001;
  double weight_decay = 0.01;
  double lambda = 4.0;
  PerturbConfig perturb{};          // s, k and the enabled-type mask
  std::size_t real_batch = kDefaultRealBatch;
  std::size_t hidden = 64;
  std::size_t steps_per_epoch = 1;  // real-batch updates per full-phase epoch
  bool warmup = true;
  bool regularizer = true;
  bool specialized_heads = true;
  bool reset_adam_between_phases = false;
  bool standardize = false;         // z-score features before training
  std::uint64_t seed = 0;

  void validate() const;
  AdamOptions adam() const { return {lr, weight_decay}; }
  ModelShape shape(std::size_t input_dim) const;
};

struct EpochRecord {
  std::string phase;  // "warmup" or "full"
  std::size_t epoch = 0;
  double synth_loss = 0.0;  // NaN when the term is absent
  double real_loss = 0.0;   // NaN in warm-up
  double val_auroc = 0.0;   // NaN in warm-up
  double val_auprc = 0.0;
  double wall_s = 0.0;
};

struct RunLog {
  std::vector<EpochRecord> records;
  std::size_t best_epoch = 0;  // full-phase epoch of the kept checkpoint, 1-based

  /// phase,epoch,synth_loss,real_loss,val_auroc,val_auprc,wall_s
  void write_csv(std::ostream& out) const;
};

/// Independent streams for synthetic sampling (injection and control
/// normals) and real-batch sampling. Initialization uses its own stream in
/// init_model.
struct TrainStreams {
  explicit TrainStreams(std::uint64_t seed)
      : synthetic(seed, "inject"), batch(seed, "batch") {}

  Rng synthetic;
  Rng batch;

  std::vector<RngState> states() const;
};

/// f(v) for every node, encoded on `g`.
std::vector<float> score_nodes(const Graph& g, const Weights<float>& weights);
RunMetrics evaluate_nodes(const Graph& g, const Weights<float>& weights, const LabelSet& truth,
                          std::span<const NodeId> nodes);

/// Warm-up: each epoch injects afresh, encodes the perturbed graph, and takes
/// one Adam step on L_synth. No real label is read. L_synth before each
/// step is appended to `log`.
void run_warmup(const Graph& g, const WeakSplit& split, const TrainConfig& cfg,
                ModelParams<float>& params, TrainStreams& streams, RunLog& log);

/// Full phase on L_real + lambda * L_synth (or L_real alone without the
/// regularizer), starting from `params` as given. Validation AUROC is
/// evaluated after every epoch; the best epoch's state is returned.
Checkpoint<float> run_full(const Graph& g, const LabelSet& truth, const WeakSplit& split,
                           const TrainConfig& cfg, ModelParams<float>& params,
                           TrainStreams& streams, RunLog& log);

struct TrainResult {
  ModelParams<float> warmup_output;  // parameters entering the full phase
  Checkpoint<float> best;            // selected by validation AUROC
  RunLog log;
  RunMetrics val;
  RunMetrics test;  // computed once, on `best`
};

/// Warm-up (if enabled), then the full phase, then test metrics.
TrainResult train(const Graph& g, const LabelSet& truth, const WeakSplit& split,
                  const TrainConfig& cfg);

}  // namespace gadforge
