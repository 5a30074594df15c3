#include "gadforge/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gadforge/error.hpp"

namespace gadforge {

std::vector<NodeId> LabelSet::labeled() const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < labels_.size(); ++v)
    if (labels_[v] != Label::Unlabeled) out.push_back(static_cast<NodeId>(v));
  return out;
}

std::vector<NodeId> LabelSet::unlabeled() const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < labels_.size(); ++v)
    if (labels_[v] == Label::Unlabeled) out.push_back(static_cast<NodeId>(v));
  return out;
}

std::vector<NodeId> LabelSet::anomalies() const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < labels_.size(); ++v)
    if (labels_[v] == Label::Anomaly) out.push_back(static_cast<NodeId>(v));
  return out;
}

bool LabelSet::fully_labeled() const noexcept {
  return std::none_of(labels_.begin(), labels_.end(),
                      [](Label l) { return l == Label::Unlabeled; });
}

Graph Graph::from_edges(std::size_t num_nodes, std::size_t dim,
                        std::vector<double> features,
                        std::span<const Edge> edges) {
  std::vector<std::vector<NodeId>> adjacency(num_nodes);
  for (const Edge& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes) {
      throw Error(ErrorKind::Contract,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") out of range for n=" + std::to_string(num_nodes));
    }
    if (e.u == e.v)
      throw Error(ErrorKind::Contract, "self-loop on node " + std::to_string(e.u));
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return from_adjacency(dim, std::move(features), adjacency);
}

Graph Graph::from_adjacency(std::size_t dim, std::vector<double> features,
                            const std::vector<std::vector<NodeId>>& adjacency) {
  Graph g;
  g.num_nodes_ = adjacency.size();
  g.dim_ = dim;
  g.features_ = std::move(features);
  g.offsets_.assign(g.num_nodes_ + 1, 0);
  std::size_t total = 0;
  for (std::size_t v = 0; v < g.num_nodes_; ++v) {
    total += adjacency[v].size();
    g.offsets_[v + 1] = total;
  }
  g.neighbors_.reserve(total);
  for (const auto& list : adjacency) g.neighbors_.insert(g.neighbors_.end(), list.begin(), list.end());
  g.validate();
  return g;
}

void Graph::validate() const {
  if (features_.size() != num_nodes_ * dim_) {
    throw Error(ErrorKind::Contract,
                "feature matrix has " + std::to_string(features_.size()) +
                    " entries, expected " + std::to_string(num_nodes_ * dim_));
  }
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!std::isfinite(features_[i])) {
      throw Error(ErrorKind::Contract,
                  "non-finite feature at node " + std::to_string(i / std::max<std::size_t>(dim_, 1)));
    }
  }
  for (std::size_t v = 0; v < num_nodes_; ++v) {
    const auto nbrs = neighbors(static_cast<NodeId>(v));
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const NodeId u = nbrs[j];
      if (u >= num_nodes_) throw Error(ErrorKind::Contract, "neighbor id out of range");
      if (u == v) throw Error(ErrorKind::Contract, "self-loop on node " + std::to_string(v));
      if (j > 0 && nbrs[j - 1] >= u)
        throw Error(ErrorKind::Contract, "unsorted or duplicate neighbor list at node " + std::to_string(v));
      if (!has_edge(u, static_cast<NodeId>(v)))
        throw Error(ErrorKind::Contract, "asymmetric edge (" + std::to_string(v) + "," + std::to_string(u) + ")");
    }
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  if (u >= num_nodes_ || v >= num_nodes_) return false;
  const auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::size_t v = 0; v < num_nodes_; ++v)
    for (const NodeId u : neighbors(static_cast<NodeId>(v)))
      if (u > v) out.push_back({static_cast<NodeId>(v), u});
  return out;
}

Graph Graph::with_features(std::vector<double> features) const {
  Graph g = *this;
  g.features_ = std::move(features);
  g.validate();
  return g;
}

EditableGraph::EditableGraph(const Graph& g)
    : dim_(g.dim()), adjacency_(g.num_nodes()),
      features_(g.features().begin(), g.features().end()) {
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    const auto nbrs = g.neighbors(static_cast<NodeId>(v));
    adjacency_[v].assign(nbrs.begin(), nbrs.end());
  }
}

bool EditableGraph::has_edge(NodeId u, NodeId v) const noexcept {
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

bool EditableGraph::add_edge(NodeId u, NodeId v) {
  if (u == v) throw Error(ErrorKind::Contract, "self-loop on node " + std::to_string(u));
  auto& lu = adjacency_[u];
  const auto it = std::lower_bound(lu.begin(), lu.end(), v);
  if (it != lu.end() && *it == v) return false;
  lu.insert(it, v);
  auto& lv = adjacency_[v];
  lv.insert(std::lower_bound(lv.begin(), lv.end(), u), u);
  return true;
}

bool EditableGraph::remove_edge(NodeId u, NodeId v) {
  auto& lu = adjacency_[u];
  const auto it = std::lower_bound(lu.begin(), lu.end(), v);
  if (it == lu.end() || *it != v) return false;
  lu.erase(it);
  auto& lv = adjacency_[v];
  lv.erase(std::lower_bound(lv.begin(), lv.end(), u));
  return true;
}

std::size_t EditableGraph::degree_sum() const noexcept {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total;
}

Graph EditableGraph::freeze() const {
  return Graph::from_adjacency(dim_, features_, adjacency_);
}

DegreeStats degree_stats(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n == 0) throw Error(ErrorKind::Contract, "degree_stats: empty graph");
  double sum = 0.0;
  for (std::size_t v = 0; v < n; ++v) sum += static_cast<double>(g.degree(static_cast<NodeId>(v)));
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double dev = static_cast<double>(g.degree(static_cast<NodeId>(v))) - mean;
    sq += dev * dev;
  }
  return {mean, std::sqrt(sq / static_cast<double>(n))};
}

FeatureStats feature_stats(const Graph& g) {
  const std::size_t n = g.num_nodes();
  const std::size_t d = g.dim();
  if (n == 0) throw Error(ErrorKind::Contract, "feature_stats: empty graph");
  FeatureStats stats{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t v = 0; v < n; ++v) {
    const auto row = g.feature_row(static_cast<NodeId>(v));
    for (std::size_t i = 0; i < d; ++i) stats.mean[i] += row[i];
  }
  for (auto& m : stats.mean) m /= static_cast<double>(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto row = g.feature_row(static_cast<NodeId>(v));
    for (std::size_t i = 0; i < d; ++i) {
      const double dev = row[i] - stats.mean[i];
      stats.stddev[i] += dev * dev;
    }
  }
  for (auto& s : stats.stddev) s = std::sqrt(s / static_cast<double>(n));
  return stats;
}

Graph standardize_features(const Graph& g) {
  const FeatureStats stats = feature_stats(g);
  std::vector<double> out(g.features().begin(), g.features().end());
  const std::size_t d = g.dim();
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const std::size_t i = idx % d;
    out[idx] -= stats.mean[i];
    if (stats.stddev[i] > 0.0) out[idx] /= stats.stddev[i];
  }
  return g.with_features(std::move(out));
}

}  // namespace gadforge
