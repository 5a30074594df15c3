#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gadforge {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Unordered pair with u < v.
inline Edge canonical(Edge e) noexcept { return e.u < e.v ? e : Edge{e.v, e.u}; }

enum class Label : std::int8_t { Unlabeled = -1, Normal = 0, Anomaly = 1 };

class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<Label> labels) : labels_(std::move(labels)) {}
  LabelSet(std::size_t n, Label fill) : labels_(n, fill) {}

  std::size_t size() const noexcept { return labels_.size(); }
  Label operator[](NodeId v) const { return labels_[v]; }
  Label& operator[](NodeId v) { return labels_[v]; }
  std::span<const Label> values() const noexcept { return labels_; }

  /// Nodes carrying a 0/1 label (the set M).
  std::vector<NodeId> labeled() const;
  /// Nodes without a label (U = V \ M).
  std::vector<NodeId> unlabeled() const;
  std::vector<NodeId> anomalies() const;
  bool fully_labeled() const noexcept;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<Label> labels_;
};

/// Immutable simple undirected attributed graph in CSR form. Every edge is
/// stored in both endpoint lists; neighbor lists are sorted ascending.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list: symmetrizes and deduplicates. Throws
  /// Error(Contract) on a self-loop, an out-of-range id, a feature matrix of
  /// the wrong size, or a non-finite feature.
  static Graph from_edges(std::size_t num_nodes, std::size_t dim,
                          std::vector<double> features,
                          std::span<const Edge> edges);

  /// Builds from sorted, symmetric neighbor lists. Validated.
  static Graph from_adjacency(std::size_t dim, std::vector<double> features,
                              const std::vector<std::vector<NodeId>>& adjacency);

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Number of undirected edges.
  std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }

  std::size_t degree(NodeId v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }
  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }
  bool has_edge(NodeId u, NodeId v) const noexcept;

  std::span<const double> features() const noexcept { return features_; }
  std::span<const double> feature_row(NodeId v) const noexcept {
    return {features_.data() + static_cast<std::size_t>(v) * dim_, dim_};
  }
  double feature(NodeId v, std::size_t i) const noexcept {
    return features_[static_cast<std::size_t>(v) * dim_ + i];
  }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> adjacency() const noexcept { return neighbors_; }

  /// Undirected edges as canonical pairs, sorted.
  std::vector<Edge> edge_list() const;

  /// Copy with a replaced feature matrix.
  Graph with_features(std::vector<double> features) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void validate() const;

  std::size_t num_nodes_ = 0;
  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<double> features_;
};

/// Mutable adjacency-list view of a graph, used while composing
/// perturbations. Neighbor lists stay sorted.
class EditableGraph {
 public:
  explicit EditableGraph(const Graph& g);

  std::size_t num_nodes() const noexcept { return adjacency_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t degree(NodeId v) const noexcept { return adjacency_[v].size(); }
  std::span<const NodeId> neighbors(NodeId v) const noexcept { return adjacency_[v]; }
  bool has_edge(NodeId u, NodeId v) const noexcept;

  /// Returns false if the edge already exists. Throws on self-loop.
  bool add_edge(NodeId u, NodeId v);
  bool remove_edge(NodeId u, NodeId v);

  std::span<const double> feature_row(NodeId v) const noexcept {
    return {features_.data() + static_cast<std::size_t>(v) * dim_, dim_};
  }
  std::span<double> feature_row(NodeId v) noexcept {
    return {features_.data() + static_cast<std::size_t>(v) * dim_, dim_};
  }

  std::size_t degree_sum() const noexcept;
  Graph freeze() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<double> features_;
};

struct DegreeStats {
  double mean = 0.0;
  double stddev = 0.0;  // population (1/n)
};

/// Per-dimension mean and population standard deviation.
struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

DegreeStats degree_stats(const Graph& g);
FeatureStats feature_stats(const Graph& g);

/// Column-wise z-score; zero-variance columns are centered only.
Graph standardize_features(const Graph& g);

}  // namespace gadforge
