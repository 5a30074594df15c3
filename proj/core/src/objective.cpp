#include "gadforge/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gadforge/loss.hpp"
#include "gadforge/optimizer.hpp"

namespace gadforge {

std::vector<SynthBatch> sample_synth_batches(PerturbationLedger& ledger, const WeakSplit& split,
                                             Rng& rng) {
  const auto perturbed = ledger.all_perturbed();
  std::vector<NodeId> eligible;
  std::set_difference(split.unlabeled_pool.begin(), split.unlabeled_pool.end(), perturbed.begin(),
                      perturbed.end(), std::back_inserter(eligible));

  std::vector<SynthBatch> batches;
  for (const PerturbType type : kAllPerturbTypes) {
    const auto& positives = ledger.nodes[type_index(type)];
    auto& controls = ledger.controls[type_index(type)];
    controls.clear();
    if (positives.empty()) continue;
    if (eligible.size() < positives.size()) {
      throw Error(ErrorKind::Injection,
                  "unlabeled pool exhausted: need " + std::to_string(positives.size()) +
                      " control normals, only " + std::to_string(eligible.size()) + " available");
    }
    const auto picks = rng.sample_without_replacement(static_cast<std::uint32_t>(eligible.size()),
                                                      static_cast<std::uint32_t>(positives.size()));
    for (const auto i : picks) controls.push_back(eligible[i]);
    std::sort(controls.begin(), controls.end());

    SynthBatch batch;
    batch.type = type;
    batch.nodes = positives;
    batch.labels.assign(positives.size(), 1);
    batch.nodes.insert(batch.nodes.end(), controls.begin(), controls.end());
    batch.labels.resize(batch.nodes.size(), 0);
    batches.push_back(std::move(batch));
  }
  return batches;
}

RealBatch sample_real_batch(const WeakSplit& split, Rng& rng, std::size_t batch_size) {
  if (split.labeled_anomalies.empty()) {
    throw Error(ErrorKind::Config,
                "no labeled anomalies (m = 0): only the warm-up phase can run in this regime");
  }
  if (batch_size < 2 || batch_size % 2 != 0)
    throw Error(ErrorKind::Config, "real batch size must be even and >= 2");
  if (split.unlabeled_pool.empty()) throw Error(ErrorKind::Config, "unlabeled pool is empty");
  const std::size_t half = batch_size / 2;
  RealBatch batch;
  batch.nodes.reserve(batch_size);
  for (std::size_t i = 0; i < half; ++i)
    batch.nodes.push_back(split.labeled_anomalies[rng.below(split.labeled_anomalies.size())]);
  const auto& pool = split.unlabeled_pool;
  if (pool.size() >= half) {
    for (const auto i : rng.sample_without_replacement(static_cast<std::uint32_t>(pool.size()),
                                                       static_cast<std::uint32_t>(half)))
      batch.nodes.push_back(pool[i]);
  } else {
    for (std::size_t i = 0; i < half; ++i) batch.nodes.push_back(pool[rng.below(pool.size())]);
  }
  batch.labels.assign(half, 1);
  batch.labels.resize(batch_size, 0);
  return batch;
}

void LossConfig::validate() const {
  if (!(std::isfinite(lambda) && lambda >= 0.0))
    throw Error(ErrorKind::Config, "lambda must be finite and >= 0");
}

double total_loss(double real, double synth, const LossConfig& cfg) noexcept {
  return real + cfg.lambda * synth;
}

template <typename T>
T synth_loss(const Matrix<T>& embeddings, const HeadParams<T>& heads,
             std::span<const SynthBatch> batches, bool specialized_heads) {
  T total{};
  for (const auto& batch : batches) {
    const auto& head = heads.synthetic.at(synthetic_head_index(batch.type, specialized_heads));
    auto p = head_logits(embeddings, head, batch.nodes);
    for (auto& x : p) x = sigmoid(x);
    total += bce<T>(p, batch.labels);
  }
  return total;
}

template <typename T>
T real_loss(const Matrix<T>& embeddings, const Head<T>& real_head, const RealBatch& batch) {
  auto p = head_logits(embeddings, real_head, batch.nodes);
  for (auto& x : p) x = sigmoid(x);
  return bce<T>(p, batch.labels);
}

template <typename T>
ObjectiveValue<T> evaluate_objective(const Graph& clean, const Graph* perturbed,
                                     const Weights<T>& weights, const ObjectiveSpec& spec,
                                     GradSet<T>* grad) {
  ObjectiveValue<T> out;
  const std::size_t width = weights.heads.real.w1.rows();

  if (spec.real) {
    EncoderCache<T> cache;
    const Matrix<T> h = encode(clean, weights.encoder, grad ? &cache : nullptr);
    HeadCache<T> head_cache;
    const auto logits = head_logits(h, weights.heads.real, spec.real->nodes, &head_cache);
    std::vector<T> d_logits(logits.size());
    out.real = bce_from_logits<T>(logits, spec.real->labels, T{1}, d_logits);
    if (grad) {
      Matrix<T> d_h(h.rows(), width);
      head_backward<T>(h, weights.heads.real, head_cache, d_logits, grad->heads.real, d_h);
      encode_backward(clean, weights.encoder, cache, d_h, grad->encoder);
    }
  }

  if (!spec.synth.empty()) {
    if (!perturbed) throw Error(ErrorKind::Contract, "synthetic term needs the perturbed graph");
    const bool with_grad = grad && spec.synth_weight != 0.0;
    const T weight = static_cast<T>(spec.synth_weight);
    EncoderCache<T> cache;
    const Matrix<T> h = encode(*perturbed, weights.encoder, with_grad ? &cache : nullptr);
    Matrix<T> d_h;
    if (with_grad) d_h = Matrix<T>(h.rows(), width);
    for (const auto& batch : spec.synth) {
      const std::size_t idx = synthetic_head_index(batch.type, spec.specialized_heads);
      const auto& head = weights.heads.synthetic.at(idx);
      HeadCache<T> head_cache;
      const auto logits = head_logits(h, head, batch.nodes, &head_cache);
      std::vector<T> d_logits(logits.size());
      out.synth += bce_from_logits<T>(logits, batch.labels, weight, d_logits);
      if (with_grad)
        head_backward<T>(h, head, head_cache, d_logits, grad->heads.synthetic[idx], d_h);
    }
    if (with_grad) encode_backward(*perturbed, weights.encoder, cache, d_h, grad->encoder);
  }

  out.total = out.real + static_cast<T>(spec.synth_weight) * out.synth;
  if (!std::isfinite(static_cast<double>(out.total)))
    throw Error(ErrorKind::Numeric, "non-finite objective value");
  if (grad) require_finite(*grad, "gradient");
  return out;
}

#define GADFORGE_INSTANTIATE(T)                                                                 \
  template T synth_loss<T>(const Matrix<T>&, const HeadParams<T>&, std::span<const SynthBatch>, \
                           bool);                                                               \
  template T real_loss<T>(const Matrix<T>&, const Head<T>&, const RealBatch&);                  \
  template ObjectiveValue<T> evaluate_objective<T>(const Graph&, const Graph*, const Weights<T>&, \
                                                   const ObjectiveSpec&, GradSet<T>*);

GADFORGE_INSTANTIATE(float)
GADFORGE_INSTANTIATE(double)
#undef GADFORGE_INSTANTIATE

}  // namespace gadforge
