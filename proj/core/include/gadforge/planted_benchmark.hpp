#pragma once

#include <cstdint>
#include <vector>

#include "gadforge/graph_io.hpp"
#include "gadforge/perturb.hpp"

namespace gadforge {

/// Stochastic-block-model graph with Gaussian community features and a
/// fraction of nodes turned into anomalies by the perturbation operators.
struct BenchmarkConfig {
  std::size_t communities = 4;
  std::size_t nodes_per_community = 250;
  double p_intra = 0.02;
  double p_inter = 0.001;
  std::size_t dim = 16;
  double mean_scale = 1.0;   // community means ~ N(0, mean_scale^2) per dimension
  double noise_scale = 1.0;  // node features ~ N(community mean, noise_scale^2)
  double anomaly_fraction = 0.05;
  std::vector<PerturbType> recipe{kAllPerturbTypes.begin(), kAllPerturbTypes.end()};
  PerturbConfig planting{};  // operator parameters used for planting

  void validate() const;
  std::size_t num_nodes() const noexcept { return communities * nodes_per_community; }
};

/// Fully labeled dataset; deterministic in (cfg, seed). Graph structure and
/// features use the "benchmark" stream, anomaly planting the "plant" stream.
/// `planted_ledger`, when given, receives the planting ground truth.
Dataset gen_benchmark(const BenchmarkConfig& cfg, std::uint64_t seed,
                      PerturbationLedger* planted_ledger = nullptr);

/// Community of each node in a generated benchmark (nodes are laid out
/// community by community).
inline std::size_t community_of(const BenchmarkConfig& cfg, NodeId v) noexcept {
  return v / cfg.nodes_per_community;
}

}  // namespace gadforge
