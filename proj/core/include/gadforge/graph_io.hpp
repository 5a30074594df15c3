#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gadforge/graph.hpp"

namespace gadforge {

struct Dataset {
  Graph graph;
  LabelSet labels;
};

// GAD text format:
//   line 1            n e d
//   next n lines      d feature values of node i
//   next n lines      label token in {-1, 0, 1}
//   next e lines      u v   (undirected, 0-based)
// Edges are symmetrized and deduplicated on load; self-loops are rejected.

/// Throws ParseError naming the offending line.
Dataset read_gad(std::istream& in);
Dataset load_graph(const std::filesystem::path& path);

/// Writes each undirected edge once (u < v, ascending). Floats use the
/// shortest representation that round-trips, so output is deterministic.
void write_gad(std::ostream& out, const Graph& g, const LabelSet& labels);
void save_graph(const std::filesystem::path& path, const Graph& g, const LabelSet& labels);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace gadforge
