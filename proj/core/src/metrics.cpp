#include "gadforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gadforge/error.hpp"

namespace gadforge {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw Error(ErrorKind::Contract, "scores and labels differ in length");
  for (const int y : labels)
    if (y != 0 && y != 1) throw Error(ErrorKind::Contract, "labels must be 0 or 1");
}

std::vector<std::size_t> order_descending(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace

template <typename T>
ScoreSet make_score_set(std::span<const T> all_scores, const LabelSet& truth,
                        std::span<const NodeId> nodes) {
  ScoreSet s;
  for (const NodeId v : nodes) {
    if (truth[v] == Label::Unlabeled)
      throw Error(ErrorKind::Contract, "evaluation node " + std::to_string(v) + " has no label");
    s.nodes.push_back(v);
    s.scores.push_back(static_cast<double>(all_scores[v]));
    s.labels.push_back(truth[v] == Label::Anomaly ? 1 : 0);
  }
  return s;
}

template ScoreSet make_score_set<float>(std::span<const float>, const LabelSet&, std::span<const NodeId>);
template ScoreSet make_score_set<double>(std::span<const double>, const LabelSet&, std::span<const NodeId>);

double auroc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0)
    throw Error(ErrorKind::Metric, "AUROC undefined: need at least one positive and one negative");

  // Rank-sum with midranks over ascending scores.
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    std::size_t pos_in_tie = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      pos_in_tie += static_cast<std::size_t>(labels[idx[j]]);
      ++j;
    }
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    rank_sum += midrank * static_cast<double>(pos_in_tie);
    i = j;
  }
  const auto p = static_cast<double>(positives);
  const auto q = static_cast<double>(negatives);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0) throw Error(ErrorKind::Metric, "AUPRC undefined: no positive labels");

  const auto idx = order_descending(scores);
  double ap = 0.0;
  std::size_t tp = 0, seen = 0, i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    std::size_t level_pos = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      level_pos += static_cast<std::size_t>(labels[idx[j]]);
      ++j;
    }
    tp += level_pos;
    seen = j;
    if (level_pos > 0) {
      const double precision = static_cast<double>(tp) / static_cast<double>(seen);
      ap += precision * static_cast<double>(level_pos) / static_cast<double>(positives);
    }
    i = j;
  }
  return ap;
}

MetricSummary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::Contract, "summarize: no values");
  MetricSummary s;
  const auto r = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / r;
  if (values.size() == 1) {
    s.single_run = true;
    return s;
  }
  double sq = 0.0;
  for (const double x : values) sq += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(sq / (r - 1.0));
  return s;
}

MetricsReport aggregate(std::string variant, std::span<const std::uint64_t> seeds,
                        std::span<const RunMetrics> runs) {
  if (runs.empty()) throw Error(ErrorKind::Contract, "aggregate: no runs");
  MetricsReport report;
  report.variant = std::move(variant);
  report.seeds.assign(seeds.begin(), seeds.end());
  report.runs.assign(runs.begin(), runs.end());
  std::vector<double> a, p;
  for (const auto& run : runs) {
    a.push_back(run.auroc);
    p.push_back(run.auprc);
  }
  report.auroc = summarize(a);
  report.auprc = summarize(p);
  return report;
}

}  // namespace gadforge
