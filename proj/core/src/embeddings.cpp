#include "gadforge/embeddings.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gadforge/encoder.hpp"
#include "gadforge/error.hpp"

namespace gadforge {

std::vector<std::string> role_tags(const LabelSet& labels, const PerturbationLedger* ledger) {
  std::vector<std::string> tags(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v)
    tags[v] = labels[static_cast<NodeId>(v)] == Label::Anomaly ? "anomaly" : "normal";
  if (ledger) {
    for (const PerturbType t : kAllPerturbTypes)
      for (const NodeId v : ledger->nodes[type_index(t)])
        tags.at(v) = "synth" + std::to_string(static_cast<int>(t));
  }
  return tags;
}

void write_embeddings(std::ostream& out, const Matrix<float>& embeddings,
                      const std::vector<std::string>& tags) {
  if (tags.size() != embeddings.rows())
    throw Error(ErrorKind::Contract, "one tag per embedding row required");
  out << "node,tag";
  for (std::size_t j = 0; j < embeddings.cols(); ++j) out << ",h" << j;
  out << '\n';
  std::array<char, 32> buf{};
  for (std::size_t v = 0; v < embeddings.rows(); ++v) {
    out << v << ',' << tags[v];
    for (const float x : embeddings.row(v)) {
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
      out << ',';
      out.write(buf.data(), ptr - buf.data());
    }
    out << '\n';
  }
}

void export_embeddings(const std::filesystem::path& path, const Graph& g,
                       const ModelParams<float>& params, const LabelSet& labels,
                       const PerturbationLedger* ledger) {
  const Matrix<float> h = encode(g, params.weights.encoder);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_embeddings(out, h, role_tags(labels, ledger));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("node,tag", 0) != 0)
    throw ParseError(1, "embedding CSV must start with 'node,tag'");
  std::size_t width = 0;
  for (const char c : line) width += c == ',' ? 1 : 0;
  width -= 1;

  EmbeddingTable table;
  std::vector<float> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    std::getline(ss, field, ',');
    table.tags.push_back(field);
    std::size_t count = 0;
    while (std::getline(ss, field, ',')) {
      float x = 0.0f;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
      if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(line_no, "invalid embedding value '" + field + "'");
      values.push_back(x);
      ++count;
    }
    if (count != width) throw ParseError(line_no, "row width does not match header");
  }
  table.values = Matrix<float>(table.tags.size(), width);
  std::copy(values.begin(), values.end(), table.values.data());
  return table;
}

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_embeddings(in);
}

}  // namespace gadforge
