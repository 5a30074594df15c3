#include "gadforge/trainer.hpp"

#include <array>
#include <chrono>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "gadforge/error.hpp"

namespace gadforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_field(std::ostream& out, double x) {
  if (std::isnan(x)) return;
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  out.write(buf.data(), ptr - buf.data());
}

// One Adam step on the given objective. Returns the objective before the step.
ObjectiveValue<float> step(const Graph& clean, const Graph* perturbed, ModelParams<float>& params,
                           const ObjectiveSpec& spec, const AdamOptions& opts) {
  GradSet<float> grad = Weights<float>::zeros(params.shape);
  const auto value = evaluate_objective(clean, perturbed, params.weights, spec, &grad);
  adam_step(params, grad, opts);
  require_finite(params.weights, "parameters");
  return value;
}

}  // namespace

void TrainConfig::validate() const {
  perturb.validate();
  adam().validate();
  LossConfig{lambda}.validate();
  if (epochs == 0) throw Error(ErrorKind::Config, "epochs must be >= 1");
  if (real_batch < 2) throw Error(ErrorKind::Config, "real_batch must be >= 2");
  if (hidden == 0) throw Error(ErrorKind::Config, "hidden must be >= 1");
  if (steps_per_epoch == 0) throw Error(ErrorKind::Config, "steps_per_epoch must be >= 1");
  if (((warmup && warmup_epochs > 0) || regularizer) && perturb.enabled_count() == 0)
    throw Error(ErrorKind::Config,
                "warm-up and the synthetic regularizer need at least one enabled perturbation type");
}

ModelShape TrainConfig::shape(std::size_t input_dim) const {
  return ModelShape{input_dim, hidden, hidden, kNumPerturbTypes};
}

void RunLog::write_csv(std::ostream& out) const {
  out << "phase,epoch,synth_loss,real_loss,val_auroc,val_auprc,wall_s\n";
  for (const auto& r : records) {
    out << r.phase << ',' << r.epoch << ',';
    write_field(out, r.synth_loss);
    out << ',';
    write_field(out, r.real_loss);
    out << ',';
    write_field(out, r.val_auroc);
    out << ',';
    write_field(out, r.val_auprc);
    out << ',';
    write_field(out, r.wall_s);
    out << '\n';
  }
}

std::vector<RngState> TrainStreams::states() const {
  return {{"inject", synthetic.key(), synthetic.counter()},
          {"batch", batch.key(), batch.counter()}};
}

std::vector<float> score_nodes(const Graph& g, const Weights<float>& weights) {
  const Matrix<float> h = encode(g, weights.encoder);
  return head_forward(h, weights.heads.real);
}

RunMetrics evaluate_nodes(const Graph& g, const Weights<float>& weights, const LabelSet& truth,
                          std::span<const NodeId> nodes) {
  const std::vector<float> scores = score_nodes(g, weights);
  return evaluate_scores(make_score_set<float>(scores, truth, nodes));
}

void run_warmup(const Graph& g, const WeakSplit& split, const TrainConfig& cfg,
                ModelParams<float>& params, TrainStreams& streams, RunLog& log) {
  const AdamOptions opts = cfg.adam();
  for (std::size_t epoch = 1; epoch <= cfg.warmup_epochs; ++epoch) {
    const auto start = Clock::now();
    Injection inj = inject_all(g, split.unlabeled_pool, cfg.perturb, streams.synthetic);
    const auto batches = sample_synth_batches(inj.ledger, split, streams.synthetic);
    const ObjectiveSpec spec{nullptr, batches, 1.0, cfg.specialized_heads};
    const auto value = step(g, &inj.graph, params, spec, opts);
    log.records.push_back(
        {"warmup", epoch, static_cast<double>(value.synth), kNaN, kNaN, kNaN, seconds_since(start)});
  }
}

Checkpoint<float> run_full(const Graph& g, const LabelSet& truth, const WeakSplit& split,
                           const TrainConfig& cfg, ModelParams<float>& params,
                           TrainStreams& streams, RunLog& log) {
  if (split.labeled_anomalies.empty())
    throw Error(ErrorKind::Config,
                "the full phase needs at least one labeled anomaly (m = 0 supports warm-up only)");
  const AdamOptions opts = cfg.adam();
  const bool use_synth = cfg.regularizer;

  Checkpoint<float> best;
  RunMetrics best_val{-1.0, -1.0};
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = Clock::now();
    std::optional<Injection> inj;
    std::vector<SynthBatch> batches;
    if (use_synth) {
      inj = inject_all(g, split.unlabeled_pool, cfg.perturb, streams.synthetic);
      batches = sample_synth_batches(inj->ledger, split, streams.synthetic);
    }
    double real_sum = 0.0;
    double synth_sum = 0.0;
    for (std::size_t s = 0; s < cfg.steps_per_epoch; ++s) {
      const RealBatch real = sample_real_batch(split, streams.batch, cfg.real_batch);
      const ObjectiveSpec spec{&real, batches, use_synth ? cfg.lambda : 0.0, cfg.specialized_heads};
      const auto value = step(g, inj ? &inj->graph : nullptr, params, spec, opts);
      real_sum += value.real;
      synth_sum += value.synth;
    }
    const double steps = static_cast<double>(cfg.steps_per_epoch);

    const RunMetrics val = evaluate_nodes(g, params.weights, truth, split.val);
    log.records.push_back({"full", epoch, use_synth ? synth_sum / steps : kNaN, real_sum / steps,
                           val.auroc, val.auprc, seconds_since(start)});
    // Strictly better AUROC, or equal AUROC with better AUPRC; earliest wins ties.
    if (val.auroc > best_val.auroc ||
        (val.auroc == best_val.auroc && val.auprc > best_val.auprc)) {
      best_val = val;
      best = Checkpoint<float>{params, streams.states(), epoch, "full"};
      log.best_epoch = epoch;
    }
  }
  return best;
}

TrainResult train(const Graph& input, const LabelSet& truth, const WeakSplit& split,
                  const TrainConfig& cfg) {
  cfg.validate();
  const Graph g = cfg.standardize ? standardize_features(input) : input;

  TrainResult result;
  ModelParams<float> params = init_model<float>(cfg.shape(g.dim()), cfg.seed);
  TrainStreams streams(cfg.seed);
  if (cfg.warmup) run_warmup(g, split, cfg, params, streams, result.log);
  if (cfg.reset_adam_between_phases) params.reset_adam();
  result.warmup_output = params;

  result.best = run_full(g, truth, split, cfg, params, streams, result.log);
  result.val = evaluate_nodes(g, result.best.params.weights, truth, split.val);
  result.test = evaluate_nodes(g, result.best.params.weights, truth, split.test);
  return result;
}

}  // namespace gadforge
