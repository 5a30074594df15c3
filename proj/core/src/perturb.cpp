#include "gadforge/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "gadforge/error.hpp"

namespace gadforge {

namespace {

constexpr int kMaxEndpointRetries = 64;

NodeId draw_other(std::size_t n, NodeId v, Rng& rng) {
  auto u = static_cast<NodeId>(rng.below(n - 1));
  return u >= v ? u + 1 : u;
}

}  // namespace

std::string_view type_name(PerturbType t) noexcept {
  switch (t) {
    case PerturbType::Degree: return "degree";
    case PerturbType::DissimilarEdge: return "dissimilar_edge";
    case PerturbType::Reorganize: return "reorganize";
    case PerturbType::FeatureSwap: return "feature_swap";
    case PerturbType::FeatureNoise: return "feature_noise";
  }
  return "unknown";
}

void PerturbConfig::validate() const {
  if (per_type < 1) throw Error(ErrorKind::Config, "per-type sample count s must be >= 1");
  if (candidates < 1) throw Error(ErrorKind::Config, "candidate set size k must be >= 1");
  if (!(alpha_lo <= alpha_hi)) throw Error(ErrorKind::Config, "alpha range has lo > hi");
  if (!(beta_lo <= beta_hi)) throw Error(ErrorKind::Config, "beta range has lo > hi");
  if (subset_min < 2 || subset_max < subset_min)
    throw Error(ErrorKind::Config, "feature subset bounds must satisfy 2 <= min <= max");
  if (!(subset_fraction >= 0.0)) throw Error(ErrorKind::Config, "feature subset fraction must be >= 0");
}

std::size_t PerturbConfig::enabled_count() const noexcept {
  return static_cast<std::size_t>(std::count(enabled.begin(), enabled.end(), true));
}

std::size_t PerturbConfig::subset_upper(std::size_t dim) const noexcept {
  const auto frac = static_cast<std::size_t>(std::floor(subset_fraction * static_cast<double>(dim)));
  return std::max(subset_min, std::min(subset_max, frac));
}

std::size_t degree_edge_count(double alpha, double sigma_deg) noexcept {
  const long long rounded = std::llround(alpha * sigma_deg);
  return static_cast<std::size_t>(std::max(1LL, rounded));
}

std::vector<NodeId> sample_candidates(std::size_t n, NodeId v, std::size_t k, Rng& rng) {
  const std::size_t take = std::min(k, n - 1);
  auto picks = rng.sample_without_replacement(static_cast<std::uint32_t>(n - 1),
                                              static_cast<std::uint32_t>(take));
  for (auto& u : picks)
    if (u >= v) ++u;
  return picks;
}

EdgeDelta perturb_degree(const EditableGraph& g, NodeId v, double sigma_deg,
                         const PerturbConfig& cfg, Rng& rng) {
  const std::size_t n = g.num_nodes();
  if (n < 2) throw Error(ErrorKind::Contract, "degree perturbation needs n >= 2");
  const std::size_t free_slots = n - 1 - g.degree(v);
  if (free_slots == 0) {
    throw Error(ErrorKind::Saturation,
                "node " + std::to_string(v) + " is already adjacent to every other node");
  }
  EdgeDelta delta;
  delta.target = v;
  delta.intensity = rng.uniform(cfg.alpha_lo, cfg.alpha_hi);
  const std::size_t count = std::min(degree_edge_count(delta.intensity, sigma_deg), free_slots);

  std::unordered_set<NodeId> chosen;
  auto is_free = [&](NodeId u) { return u != v && !g.has_edge(v, u) && !chosen.contains(u); };
  for (std::size_t i = 0; i < count; ++i) {
    NodeId u = 0;
    bool found = false;
    for (int attempt = 0; attempt < kMaxEndpointRetries && !found; ++attempt) {
      u = draw_other(n, v, rng);
      found = is_free(u);
    }
    if (!found) {
      const auto start = static_cast<NodeId>(rng.below(n));
      for (std::size_t step = 0; step < n && !found; ++step) {
        u = static_cast<NodeId>((start + step) % n);
        found = is_free(u);
      }
    }
    chosen.insert(u);
    delta.added.push_back(canonical({u, v}));
  }
  return delta;
}

EdgeDelta perturb_dissimilar_edge(const EditableGraph& g, NodeId v, std::size_t k, Rng& rng) {
  const std::size_t n = g.num_nodes();
  if (n < 2) throw Error(ErrorKind::Contract, "dissimilar-edge perturbation needs n >= 2");
  const auto candidates = sample_candidates(n, v, k, rng);
  const auto partner =
      most_dissimilar(g, v, candidates, [&](NodeId u) { return g.has_edge(v, u); });
  if (!partner) {
    throw Error(ErrorKind::Saturation,
                "every candidate is already adjacent to node " + std::to_string(v));
  }
  EdgeDelta delta;
  delta.target = v;
  delta.partner = partner;
  delta.added.push_back(canonical({*partner, v}));
  return delta;
}

EdgeDelta perturb_reorganize(const EditableGraph& g, NodeId v, Rng& rng) {
  const std::size_t deg = g.degree(v);
  if (deg == 0) {
    throw Error(ErrorKind::Contract,
                "reorganize perturbation reached isolated node " + std::to_string(v));
  }
  EdgeDelta delta;
  delta.target = v;
  for (const NodeId u : g.neighbors(v)) delta.removed.push_back(canonical({u, v}));
  auto endpoints = sample_candidates(g.num_nodes(), v, deg, rng);
  std::sort(endpoints.begin(), endpoints.end());
  for (const NodeId u : endpoints) delta.added.push_back(canonical({u, v}));
  return delta;
}

FeatureDelta perturb_feature_swap(const EditableGraph& g, NodeId v, std::size_t k, Rng& rng) {
  const std::size_t n = g.num_nodes();
  if (n < 2) throw Error(ErrorKind::Contract, "feature-swap perturbation needs n >= 2");
  const auto candidates = sample_candidates(n, v, k, rng);
  const auto donor = most_dissimilar(g, v, candidates, [](NodeId) { return false; });
  FeatureDelta delta;
  delta.target = v;
  delta.donor = donor;
  const auto row = g.feature_row(*donor);
  delta.replacement.assign(row.begin(), row.end());
  return delta;
}

FeatureDelta perturb_feature_noise(const EditableGraph& g, NodeId v, const FeatureStats& stats,
                                   const PerturbConfig& cfg, Rng& rng) {
  const std::size_t d = g.dim();
  if (d < 2) throw Error(ErrorKind::Config, "feature-noise perturbation needs d >= 2");
  if (stats.stddev.size() != d) throw Error(ErrorKind::Contract, "feature stats dimension mismatch");
  const auto size = static_cast<std::uint32_t>(rng.uniform_int(
      static_cast<std::int64_t>(cfg.subset_min), static_cast<std::int64_t>(cfg.subset_upper(d))));
  const auto dims = rng.sample_without_replacement(static_cast<std::uint32_t>(d), size);

  FeatureDelta delta;
  delta.target = v;
  delta.scale = rng.uniform(cfg.beta_lo, cfg.beta_hi);
  delta.subset.assign(dims.begin(), dims.end());
  std::sort(delta.subset.begin(), delta.subset.end());
  const auto row = g.feature_row(v);
  for (const std::size_t i : delta.subset) {
    delta.updates.push_back({i, row[i] + delta.scale * stats.stddev[i]});
  }
  return delta;
}

void apply(EditableGraph& g, const EdgeDelta& delta) {
  for (const Edge& e : delta.removed) g.remove_edge(e.u, e.v);
  for (const Edge& e : delta.added) {
    if (!g.add_edge(e.u, e.v)) {
      throw Error(ErrorKind::Contract, "edge delta duplicates existing edge (" +
                                           std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
  }
}

void apply(EditableGraph& g, const FeatureDelta& delta) {
  auto row = g.feature_row(delta.target);
  if (!delta.replacement.empty()) std::copy(delta.replacement.begin(), delta.replacement.end(), row.begin());
  for (const auto& up : delta.updates) row[up.dim] = up.value;
}

int PerturbationLedger::synthetic_label(NodeId v, PerturbType t) const {
  const auto& set = nodes[type_index(t)];
  return std::binary_search(set.begin(), set.end(), v) ? 1 : 0;
}

std::vector<NodeId> PerturbationLedger::all_perturbed() const {
  std::vector<NodeId> out;
  for (const auto& set : nodes) out.insert(out.end(), set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

Injection perturb_sequential(const Graph& g,
                             std::array<std::vector<NodeId>, kNumPerturbTypes> targets,
                             std::span<const NodeId> reserve, const PerturbConfig& cfg,
                             Rng& rng) {
  cfg.validate();
  const double sigma_deg = degree_stats(g).stddev;
  const FeatureStats stats = feature_stats(g);

  std::unordered_set<NodeId> taken;
  for (auto& set : targets) {
    std::sort(set.begin(), set.end());
    for (const NodeId v : set) {
      if (v >= g.num_nodes()) throw Error(ErrorKind::Contract, "perturbation target out of range");
      if (!taken.insert(v).second) {
        throw Error(ErrorKind::Contract,
                    "node " + std::to_string(v) + " assigned to more than one perturbation type");
      }
    }
  }

  EditableGraph work(g);
  Injection result;
  for (const PerturbType type : kAllPerturbTypes) {
    auto& set = targets[type_index(type)];
    for (NodeId& v : set) {
      LedgerEntry entry;
      entry.type = type;
      switch (type) {
        case PerturbType::Degree:
          entry.edges = perturb_degree(work, v, sigma_deg, cfg, rng);
          break;
        case PerturbType::DissimilarEdge:
          entry.edges = perturb_dissimilar_edge(work, v, cfg.candidates, rng);
          break;
        case PerturbType::Reorganize: {
          if (work.degree(v) == 0) {
            std::vector<NodeId> eligible;
            for (const NodeId u : reserve)
              if (!taken.contains(u) && work.degree(u) > 0) eligible.push_back(u);
            if (eligible.empty()) {
              throw Error(ErrorKind::Injection,
                          "no node with degree >= 1 available for the reorganize perturbation");
            }
            const NodeId replacement = eligible[rng.below(eligible.size())];
            taken.erase(v);
            taken.insert(replacement);
            v = replacement;
          }
          entry.edges = perturb_reorganize(work, v, rng);
          break;
        }
        case PerturbType::FeatureSwap:
          entry.features = perturb_feature_swap(work, v, cfg.candidates, rng);
          break;
        case PerturbType::FeatureNoise:
          entry.features = perturb_feature_noise(work, v, stats, cfg, rng);
          break;
      }
      entry.node = v;
      if (entry.edges) apply(work, *entry.edges);
      if (entry.features) apply(work, *entry.features);
      result.ledger.entries.push_back(std::move(entry));
    }
    std::sort(set.begin(), set.end());
    result.ledger.nodes[type_index(type)] = set;
  }
  result.graph = work.freeze();
  return result;
}

Injection inject_all(const Graph& g, std::span<const NodeId> pool, const PerturbConfig& cfg,
                     Rng& rng) {
  cfg.validate();
  const std::size_t required = cfg.enabled_count() * cfg.per_type;
  if (pool.size() < required) {
    throw Error(ErrorKind::Injection, "unlabeled pool has " + std::to_string(pool.size()) +
                                          " nodes, injection needs >= " + std::to_string(required));
  }
  const auto picks = rng.sample_without_replacement(static_cast<std::uint32_t>(pool.size()),
                                                    static_cast<std::uint32_t>(required));
  std::array<std::vector<NodeId>, kNumPerturbTypes> targets;
  std::size_t next = 0;
  for (const PerturbType type : kAllPerturbTypes) {
    if (!cfg.is_enabled(type)) continue;
    auto& set = targets[type_index(type)];
    for (std::size_t i = 0; i < cfg.per_type; ++i) set.push_back(pool[picks[next++]]);
  }
  return perturb_sequential(g, std::move(targets), pool, cfg, rng);
}

}  // namespace gadforge
