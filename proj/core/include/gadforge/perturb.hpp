#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gadforge/graph.hpp"
#include "gadforge/rng.hpp"

namespace gadforge {

/// The five synthetic anomaly families, in the order they are composed.
enum class PerturbType : int {
  Degree = 1,          // extra edges to random endpoints
  DissimilarEdge = 2,  // one edge to the most dissimilar candidate
  Reorganize = 3,      // replace every edge, keep the degree
  FeatureSwap = 4,     // copy the most dissimilar candidate's features
  FeatureNoise = 5,    // shift a few dimensions by beta * sigma_i
};

inline constexpr std::size_t kNumPerturbTypes = 5;
inline constexpr std::array<PerturbType, kNumPerturbTypes> kAllPerturbTypes = {
    PerturbType::Degree, PerturbType::DissimilarEdge, PerturbType::Reorganize,
    PerturbType::FeatureSwap, PerturbType::FeatureNoise};

inline std::size_t type_index(PerturbType t) noexcept { return static_cast<std::size_t>(t) - 1; }
std::string_view type_name(PerturbType t) noexcept;

struct PerturbConfig {
  std::size_t per_type = 32;     // s: nodes perturbed per type
  std::size_t candidates = 4096; // k: candidate set size for types 2 and 4
  double alpha_lo = 3.0, alpha_hi = 5.0;
  double beta_lo = 3.0, beta_hi = 5.0;
  std::size_t subset_min = 2;
  std::size_t subset_max = 5;
  double subset_fraction = 0.1;
  std::array<bool, kNumPerturbTypes> enabled{true, true, true, true, true};

  void validate() const;
  std::size_t enabled_count() const noexcept;
  bool is_enabled(PerturbType t) const noexcept { return enabled[type_index(t)]; }
  /// Upper bound on |S| for dimension d, clamped so it never falls below
  /// subset_min.
  std::size_t subset_upper(std::size_t dim) const noexcept;
};

struct EdgeDelta {
  NodeId target = 0;
  std::vector<Edge> added;    // canonical pairs
  std::vector<Edge> removed;  // canonical pairs; non-empty only for Reorganize
  std::optional<NodeId> partner;  // chosen endpoint for DissimilarEdge
  double intensity = 0.0;         // alpha for Degree

  friend bool operator==(const EdgeDelta&, const EdgeDelta&) = default;
};

struct FeatureUpdate {
  std::size_t dim = 0;
  double value = 0.0;

  friend bool operator==(const FeatureUpdate&, const FeatureUpdate&) = default;
};

struct FeatureDelta {
  NodeId target = 0;
  std::vector<double> replacement;     // full row for FeatureSwap
  std::vector<FeatureUpdate> updates;  // sparse updates for FeatureNoise, sorted by dim
  std::optional<NodeId> donor;
  std::vector<std::size_t> subset;     // S, sorted
  double scale = 0.0;                  // beta for FeatureNoise

  friend bool operator==(const FeatureDelta&, const FeatureDelta&) = default;
};

/// Number of edges Degree adds before clipping: max(1, round(alpha * sigma)).
std::size_t degree_edge_count(double alpha, double sigma_deg) noexcept;

/// min(k, n-1) distinct nodes drawn uniformly from V \ {v}.
std::vector<NodeId> sample_candidates(std::size_t n, NodeId v, std::size_t k, Rng& rng);

/// Candidate with the largest L2 feature distance to v, ties to the smallest
/// id, skipping candidates for which `excluded(u)` holds.
template <typename Excluded>
std::optional<NodeId> most_dissimilar(const EditableGraph& g, NodeId v,
                                      std::span<const NodeId> candidates,
                                      Excluded excluded);

EdgeDelta perturb_degree(const EditableGraph& g, NodeId v, double sigma_deg,
                         const PerturbConfig& cfg, Rng& rng);
EdgeDelta perturb_dissimilar_edge(const EditableGraph& g, NodeId v, std::size_t k, Rng& rng);
EdgeDelta perturb_reorganize(const EditableGraph& g, NodeId v, Rng& rng);
FeatureDelta perturb_feature_swap(const EditableGraph& g, NodeId v, std::size_t k, Rng& rng);
FeatureDelta perturb_feature_noise(const EditableGraph& g, NodeId v, const FeatureStats& stats,
                                   const PerturbConfig& cfg, Rng& rng);

void apply(EditableGraph& g, const EdgeDelta& delta);
void apply(EditableGraph& g, const FeatureDelta& delta);

struct LedgerEntry {
  PerturbType type = PerturbType::Degree;
  NodeId node = 0;
  std::optional<EdgeDelta> edges;
  std::optional<FeatureDelta> features;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Ground truth of one injection.
struct PerturbationLedger {
  std::array<std::vector<NodeId>, kNumPerturbTypes> nodes;     // V_k, sorted
  std::array<std::vector<NodeId>, kNumPerturbTypes> controls;  // normals paired with V_k
  std::vector<LedgerEntry> entries;                            // application order

  /// y_v^k: 1 iff v was perturbed with type t.
  int synthetic_label(NodeId v, PerturbType t) const;
  std::vector<NodeId> all_perturbed() const;

  friend bool operator==(const PerturbationLedger&, const PerturbationLedger&) = default;
};

struct Injection {
  Graph graph;
  PerturbationLedger ledger;
};

/// Applies the types in order 1..5 to the given target sets on an evolving
/// copy of g. Degree and feature statistics come from g itself. A
/// Reorganize target that is isolated at its turn is replaced by a random
/// node from `reserve` (excluding all targets) with degree >= 1.
Injection perturb_sequential(const Graph& g,
                             std::array<std::vector<NodeId>, kNumPerturbTypes> targets,
                             std::span<const NodeId> reserve, const PerturbConfig& cfg,
                             Rng& rng);

/// Samples disjoint V_k of size s from `pool` for every enabled type and
/// composes the perturbations. The input graph is not modified.
Injection inject_all(const Graph& g, std::span<const NodeId> pool, const PerturbConfig& cfg,
                     Rng& rng);

}  // namespace gadforge

#include "gadforge/perturb_inl.hpp"
