#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gadforge/params.hpp"
#include "gadforge/perturb.hpp"

namespace gadforge {

/// "synth<k>" for ledger nodes, else "anomaly" / "normal" from `labels`.
std::vector<std::string> role_tags(const LabelSet& labels, const PerturbationLedger* ledger);

/// CSV with header node,tag,h0..h{d'-1}; one row per node.
void write_embeddings(std::ostream& out, const Matrix<float>& embeddings,
                      const std::vector<std::string>& tags);

/// Encodes `g` with `params` and writes the embedding CSV to `path`.
void export_embeddings(const std::filesystem::path& path, const Graph& g,
                       const ModelParams<float>& params, const LabelSet& labels,
                       const PerturbationLedger* ledger = nullptr);

struct EmbeddingTable {
  Matrix<float> values;
  std::vector<std::string> tags;
};

EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable read_embeddings(const std::filesystem::path& path);

}  // namespace gadforge
