#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gadforge/graph.hpp"
#include "gadforge/rng.hpp"

namespace gadforge::testing {

/// Erdos-Renyi graph with standard-normal features.
inline Graph random_graph(std::size_t n, std::size_t d, double p, std::uint64_t seed) {
  Rng rng(seed, "fixture");
  std::vector<double> x(n * d);
  for (auto& v : x) v = rng.normal();
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  return Graph::from_edges(n, d, std::move(x), edges);
}

inline std::vector<NodeId> iota_nodes(std::size_t n, NodeId first = 0) {
  std::vector<NodeId> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = first + static_cast<NodeId>(i);
  return out;
}

inline bool sorted_disjoint(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::vector<NodeId> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return both.empty();
}

}  // namespace gadforge::testing
