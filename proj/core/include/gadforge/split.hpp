#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gadforge/graph.hpp"

namespace gadforge {

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

/// Train/val/test partition for the weakly supervised protocol. Training
/// sees only `labeled_anomalies` (label 1) and `unlabeled_pool` (treated as
/// label 0). `hidden_anomalies` lists the true anomalies mixed into the pool
/// and is kept for auditing only.
struct WeakSplit {
  std::vector<NodeId> train, val, test;  // sorted, disjoint, cover V
  std::vector<NodeId> labeled_anomalies; // M, sorted
  std::vector<NodeId> unlabeled_pool;    // U, sorted
  std::vector<NodeId> hidden_anomalies;  // subset of U, sorted
  std::vector<NodeId> discarded;         // train anomalies unused by training
  std::uint64_t seed = 0;

  /// Labels for training: M -> Anomaly, everything else Unlabeled.
  LabelSet training_labels(std::size_t num_nodes) const;

  friend bool operator==(const WeakSplit&, const WeakSplit&) = default;
};

/// Stratified split: each class is shuffled and divided by `ratios`
/// (rounded to nearest, test takes the remainder). The first m train
/// anomalies stay labeled; the next round(contamination * train normals)
/// are hidden in the unlabeled pool; the rest are discarded.
WeakSplit make_weak_split(const Graph& g, const LabelSet& full_labels, std::size_t m,
                          double contamination, SplitRatios ratios, std::uint64_t seed);

}  // namespace gadforge
