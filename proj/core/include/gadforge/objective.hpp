#pragma once

#include <span>
#include <vector>

#include "gadforge/encoder.hpp"
#include "gadforge/heads.hpp"
#include "gadforge/perturb.hpp"
#include "gadforge/split.hpp"

namespace gadforge {

/// V_k plus the same number of control normals; labels are y^k.
struct SynthBatch {
  PerturbType type = PerturbType::Degree;
  std::vector<NodeId> nodes;
  std::vector<int> labels;
};

/// Half labeled anomalies (drawn with replacement), half unlabeled-pool
/// nodes treated as normal.
struct RealBatch {
  std::vector<NodeId> nodes;
  std::vector<int> labels;
};

inline constexpr std::size_t kDefaultRealBatch = 512;

/// One batch per enabled type. Controls come from the unlabeled pool minus
/// every perturbed node; they are recorded in `ledger.controls`.
std::vector<SynthBatch> sample_synth_batches(PerturbationLedger& ledger, const WeakSplit& split,
                                             Rng& rng);

/// batch_size / 2 anomaly draws with replacement from the labeled set, and
/// batch_size / 2 pool draws (without replacement unless the pool is
/// smaller). Throws Error(Config) when no anomaly is labeled.
RealBatch sample_real_batch(const WeakSplit& split, Rng& rng,
                            std::size_t batch_size = kDefaultRealBatch);

struct LossConfig {
  double lambda = 4.0;
  void validate() const;
};

/// Head used for a synthetic type: its own, or head 0 when heads are shared.
inline std::size_t synthetic_head_index(PerturbType t, bool specialized) noexcept {
  return specialized ? type_index(t) : 0;
}

/// L_synth = sum_k bce(p_k over B_k, y^k).
template <typename T>
T synth_loss(const Matrix<T>& embeddings, const HeadParams<T>& heads,
             std::span<const SynthBatch> batches, bool specialized_heads = true);

/// L_real = bce(f over B, y).
template <typename T>
T real_loss(const Matrix<T>& embeddings, const Head<T>& real_head, const RealBatch& batch);

/// L = L_real + lambda * L_synth.
double total_loss(double real, double synth, const LossConfig& cfg) noexcept;

/// Which terms enter a training objective. The real term is evaluated on the
/// clean graph, the synthetic term on the perturbed graph.
struct ObjectiveSpec {
  const RealBatch* real = nullptr;
  std::span<const SynthBatch> synth{};
  double synth_weight = 1.0;  // lambda in the full phase, 1 in warm-up
  bool specialized_heads = true;
};

template <typename T>
struct ObjectiveValue {
  T real = T{};
  T synth = T{};
  T total = T{};
};

/// Evaluates the objective and, when `grad` is non-null, accumulates its
/// exact gradient into `grad` (which must be shaped like `weights`). A zero
/// synth_weight removes the synthetic term from the gradient entirely.
template <typename T>
ObjectiveValue<T> evaluate_objective(const Graph& clean, const Graph* perturbed,
                                     const Weights<T>& weights, const ObjectiveSpec& spec,
                                     GradSet<T>* grad);

}  // namespace gadforge
