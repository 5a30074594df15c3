#pragma once

#include <span>
#include <string>
#include <vector>

#include "gadforge/graph.hpp"

namespace gadforge {

struct ScoreSet {
  std::vector<NodeId> nodes;
  std::vector<double> scores;
  std::vector<int> labels;  // 0 / 1
};

/// Scores and ground-truth labels of `nodes`, taken from whole-graph arrays.
template <typename T>
ScoreSet make_score_set(std::span<const T> all_scores, const LabelSet& truth,
                        std::span<const NodeId> nodes);

/// Probability that a random positive scores above a random negative, ties
/// counting one half. Throws Error(Metric) on single-class input.
double auroc(std::span<const double> scores, std::span<const int> labels);
inline double auroc(const ScoreSet& s) { return auroc(s.scores, s.labels); }

/// Average precision with tied scores entering together:
/// sum over score levels of precision(level) * (positives at level / P).
/// Throws Error(Metric) when there is no positive.
double auprc(std::span<const double> scores, std::span<const int> labels);
inline double auprc(const ScoreSet& s) { return auprc(s.scores, s.labels); }

struct RunMetrics {
  double auroc = 0.0;
  double auprc = 0.0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

inline RunMetrics evaluate_scores(const ScoreSet& s) { return {auroc(s), auprc(s)}; }

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;      // sample (1/(r-1)); 0 for a single run
  bool single_run = false;
};

/// Mean and sample standard deviation. Requires at least one value.
MetricSummary summarize(std::span<const double> values);

struct MetricsReport {
  std::string variant;
  std::vector<std::uint64_t> seeds;
  std::vector<RunMetrics> runs;
  MetricSummary auroc;
  MetricSummary auprc;
};

MetricsReport aggregate(std::string variant, std::span<const std::uint64_t> seeds,
                        std::span<const RunMetrics> runs);

}  // namespace gadforge
