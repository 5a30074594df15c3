#pragma once

#include <limits>

namespace gadforge {

template <typename Excluded>
std::optional<NodeId> most_dissimilar(const EditableGraph& g, NodeId v,
                                      std::span<const NodeId> candidates,
                                      Excluded excluded) {
  const auto xv = g.feature_row(v);
  std::optional<NodeId> best;
  double best_dist = -std::numeric_limits<double>::infinity();
  for (const NodeId u : candidates) {
    if (excluded(u)) continue;
    const auto xu = g.feature_row(u);
    double sq = 0.0;
    for (std::size_t i = 0; i < xv.size(); ++i) {
      const double diff = xv[i] - xu[i];
      sq += diff * diff;
    }
    if (sq > best_dist || (sq == best_dist && best && u < *best)) {
      best_dist = sq;
      best = u;
    }
  }
  return best;
}

}  // namespace gadforge
