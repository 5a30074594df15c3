#include "gadforge/planted_benchmark.hpp"

#include <cmath>
#include <string>

#include "gadforge/error.hpp"
#include "gadforge/rng.hpp"

namespace gadforge {

void BenchmarkConfig::validate() const {
  if (communities < 1) throw Error(ErrorKind::Config, "benchmark needs at least one community");
  if (nodes_per_community < 1) throw Error(ErrorKind::Config, "benchmark needs nodes per community >= 1");
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(p_intra) || !prob(p_inter))
    throw Error(ErrorKind::Config, "edge probabilities must lie in [0, 1]");
  if (!(anomaly_fraction >= 0.0 && anomaly_fraction <= 0.5))
    throw Error(ErrorKind::Config, "anomaly fraction must lie in [0, 0.5], got " +
                                       std::to_string(anomaly_fraction));
  if (!(mean_scale >= 0.0) || !(noise_scale >= 0.0))
    throw Error(ErrorKind::Config, "feature scales must be >= 0");
  if (anomaly_fraction > 0.0 && recipe.empty())
    throw Error(ErrorKind::Config, "anomaly recipe is empty");
  planting.validate();
}

Dataset gen_benchmark(const BenchmarkConfig& cfg, std::uint64_t seed, PerturbationLedger* planted_ledger) {
  cfg.validate();
  const std::size_t n = cfg.num_nodes();
  const std::size_t d = cfg.dim;
  Rng rng(seed, "benchmark");

  std::vector<double> means(cfg.communities * d);
  for (auto& mu : means) mu = cfg.mean_scale * rng.normal();
  std::vector<double> features(n * d);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t c = v / cfg.nodes_per_community;
    for (std::size_t i = 0; i < d; ++i)
      features[v * d + i] = means[c * d + i] + cfg.noise_scale * rng.normal();
  }

  // One Bernoulli draw per pair; structure depends on comparisons only.
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t cu = u / cfg.nodes_per_community;
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = (v / cfg.nodes_per_community == cu) ? cfg.p_intra : cfg.p_inter;
      if (rng.bernoulli(p)) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
  }
  const Graph clean = Graph::from_edges(n, d, std::move(features), edges);

  LabelSet labels(n, Label::Normal);
  const auto num_anomalies =
      static_cast<std::size_t>(std::llround(cfg.anomaly_fraction * static_cast<double>(n)));
  if (num_anomalies == 0) return {clean, labels};

  Rng plant(seed, "plant");
  const auto picks = plant.sample_without_replacement(static_cast<std::uint32_t>(n),
                                                      static_cast<std::uint32_t>(num_anomalies));
  std::array<std::vector<NodeId>, kNumPerturbTypes> targets;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    targets[type_index(cfg.recipe[i % cfg.recipe.size()])].push_back(picks[i]);
  }
  std::vector<NodeId> reserve;
  for (std::size_t v = 0; v < n; ++v) reserve.push_back(static_cast<NodeId>(v));

  Injection planted = perturb_sequential(clean, std::move(targets), reserve, cfg.planting, plant);
  for (const NodeId v : planted.ledger.all_perturbed()) labels[v] = Label::Anomaly;
  if (planted_ledger) *planted_ledger = planted.ledger;
  return {std::move(planted.graph), std::move(labels)};
}

}  // namespace gadforge
