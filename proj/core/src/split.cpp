#include "gadforge/split.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gadforge/error.hpp"
#include "gadforge/rng.hpp"

namespace gadforge {

LabelSet WeakSplit::training_labels(std::size_t num_nodes) const {
  LabelSet labels(num_nodes, Label::Unlabeled);
  for (const NodeId v : labeled_anomalies) labels[v] = Label::Anomaly;
  return labels;
}

WeakSplit make_weak_split(const Graph& g, const LabelSet& full_labels, std::size_t m,
                          double contamination, SplitRatios ratios, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  if (full_labels.size() != n) throw Error(ErrorKind::Contract, "label count does not match node count");
  if (!full_labels.fully_labeled())
    throw Error(ErrorKind::Split, "weak split requires every node to carry a 0/1 label");
  if (!(contamination >= 0.0 && contamination < 1.0))
    throw Error(ErrorKind::Config, "contamination must lie in [0, 1)");
  if (!(ratios.train >= 0 && ratios.val >= 0 && ratios.test >= 0) ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
    throw Error(ErrorKind::Config, "split ratios must be non-negative and sum to 1");

  Rng rng(seed, "split");
  std::vector<NodeId> anomalies, normals;
  for (std::size_t v = 0; v < n; ++v)
    (full_labels[static_cast<NodeId>(v)] == Label::Anomaly ? anomalies : normals)
        .push_back(static_cast<NodeId>(v));
  rng.shuffle(anomalies);
  rng.shuffle(normals);

  WeakSplit split;
  split.seed = seed;
  std::vector<NodeId> train_anomalies, train_normals;
  auto assign = [&](const std::vector<NodeId>& cls, std::vector<NodeId>& train_part) {
    const auto total = static_cast<double>(cls.size());
    const auto n_train = static_cast<std::size_t>(std::llround(ratios.train * total));
    const auto n_val = std::min(cls.size() - n_train,
                                static_cast<std::size_t>(std::llround(ratios.val * total)));
    train_part.assign(cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.val.insert(split.val.end(), cls.begin() + static_cast<std::ptrdiff_t>(n_train),
                     cls.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    split.test.insert(split.test.end(), cls.begin() + static_cast<std::ptrdiff_t>(n_train + n_val),
                      cls.end());
  };
  assign(anomalies, train_anomalies);
  assign(normals, train_normals);

  const auto quota = static_cast<std::size_t>(
      std::llround(contamination * static_cast<double>(train_normals.size())));
  if (train_anomalies.size() < m + quota) {
    throw Error(ErrorKind::Split,
                "train partition has " + std::to_string(train_anomalies.size()) +
                    " anomalies, need " + std::to_string(m + quota) + " (m=" + std::to_string(m) +
                    " + contamination quota " + std::to_string(quota) + "), short by " +
                    std::to_string(m + quota - train_anomalies.size()));
  }

  split.labeled_anomalies.assign(train_anomalies.begin(), train_anomalies.begin() + static_cast<std::ptrdiff_t>(m));
  split.hidden_anomalies.assign(train_anomalies.begin() + static_cast<std::ptrdiff_t>(m),
                                train_anomalies.begin() + static_cast<std::ptrdiff_t>(m + quota));
  split.discarded.assign(train_anomalies.begin() + static_cast<std::ptrdiff_t>(m + quota), train_anomalies.end());
  split.unlabeled_pool = train_normals;
  split.unlabeled_pool.insert(split.unlabeled_pool.end(), split.hidden_anomalies.begin(),
                              split.hidden_anomalies.end());
  split.train = train_normals;
  split.train.insert(split.train.end(), train_anomalies.begin(), train_anomalies.end());

  for (auto* part : {&split.train, &split.val, &split.test, &split.labeled_anomalies,
                     &split.unlabeled_pool, &split.hidden_anomalies, &split.discarded})
    std::sort(part->begin(), part->end());
  return split;
}

}  // namespace gadforge
