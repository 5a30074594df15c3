#include "gadforge/graph_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "gadforge/error.hpp"

namespace gadforge {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> next(const char* what) {
    if (!std::getline(in_, buffer_)) {
      throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + what);
    }
    ++line_;
    return split_ws(buffer_);
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t line_ = 0;
};

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

Dataset read_gad(std::istream& in) {
  LineReader reader(in);
  const auto header = reader.next("header");
  std::size_t n = 0, e = 0, d = 0;
  if (header.size() != 3 || !parse_number(header[0], n) || !parse_number(header[1], e) ||
      !parse_number(header[2], d)) {
    throw ParseError(reader.line(), "malformed header, expected 'n e d'");
  }

  std::vector<double> features;
  features.reserve(n * d);
  for (std::size_t v = 0; v < n; ++v) {
    const auto toks = reader.next("feature row");
    if (toks.size() != d) {
      throw ParseError(reader.line(), "expected " + std::to_string(d) + " features, got " +
                                          std::to_string(toks.size()));
    }
    for (const auto tok : toks) {
      double x = 0.0;
      if (!parse_number(tok, x)) throw ParseError(reader.line(), "invalid feature '" + std::string(tok) + "'");
      if (!std::isfinite(x)) throw ParseError(reader.line(), "non-finite feature '" + std::string(tok) + "'");
      features.push_back(x);
    }
  }

  std::vector<Label> labels;
  labels.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto toks = reader.next("label");
    int value = 0;
    if (toks.size() != 1 || !parse_number(toks[0], value) || value < -1 || value > 1) {
      throw ParseError(reader.line(), "label token must be one of -1, 0, 1");
    }
    labels.push_back(static_cast<Label>(value));
  }

  std::vector<Edge> edges;
  edges.reserve(e);
  for (std::size_t i = 0; i < e; ++i) {
    const auto toks = reader.next("edge");
    NodeId u = 0, v = 0;
    if (toks.size() != 2 || !parse_number(toks[0], u) || !parse_number(toks[1], v)) {
      throw ParseError(reader.line(), "malformed edge, expected 'u v'");
    }
    if (u >= n || v >= n) {
      throw ParseError(reader.line(), "node id out of range [0," + std::to_string(n) + ")");
    }
    if (u == v) throw ParseError(reader.line(), "self-loop on node " + std::to_string(u));
    edges.push_back({u, v});
  }

  return {Graph::from_edges(n, d, std::move(features), edges), LabelSet(std::move(labels))};
}

Dataset load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_gad(in);
}

void write_gad(std::ostream& out, const Graph& g, const LabelSet& labels) {
  if (labels.size() != g.num_nodes())
    throw Error(ErrorKind::Contract, "label count does not match node count");
  out << g.num_nodes() << ' ' << g.num_edges() << ' ' << g.dim() << '\n';
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    const auto row = g.feature_row(static_cast<NodeId>(v));
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ' ';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  for (const Label l : labels.values()) out << static_cast<int>(l) << '\n';
  for (const Edge& edge : g.edge_list()) out << edge.u << ' ' << edge.v << '\n';
}

void save_graph(const std::filesystem::path& path, const Graph& g, const LabelSet& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_gad(out, g, labels);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace gadforge
