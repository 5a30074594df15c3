#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gadforge/trainer.hpp"

namespace gadforge {

/// Weak-supervision protocol applied per seed.
struct Protocol {
  std::size_t m = 30;
  double contamination = 0.01;
  SplitRatios ratios{};
};

/// One seed of one configuration. The seed drives the split and every
/// training stream; the dataset is shared.
struct SeedRun {
  std::uint64_t seed = 0;
  WeakSplit split;
  TrainResult result;
  double wall_s = 0.0;
};

SeedRun run_seed(const Graph& g, const LabelSet& truth, const Protocol& protocol,
                 TrainConfig cfg, std::uint64_t seed);

/// Runs fn(0..count-1) on up to `jobs` threads. Each index is run exactly
/// once; the first exception is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

struct Variant {
  std::string name;
  TrainConfig cfg;
};

/// The 20 variants derived from `base`, in order: full, warmup_only,
/// reg_only, baseline; drop_tau1..drop_tau5; single_head;
/// lambda_<x> for x in {0, 0.5, 1, 2, 4, 10, 20, 50, 100, 300}.
std::vector<Variant> ablation_variants(const TrainConfig& base);

struct AblationRow {
  std::string variant;
  std::uint64_t seed = 0;
  RunMetrics test;
  std::size_t epochs = 0;  // warm-up plus full-phase epochs run
  double wall_s = 0.0;
};

struct AblationResult {
  std::vector<AblationRow> rows;         // variant-major, seeds ascending
  std::vector<MetricsReport> summaries;  // one per variant
};

AblationResult run_variants(const Graph& g, const LabelSet& truth, const Protocol& protocol,
                            const std::vector<Variant>& variants,
                            const std::vector<std::uint64_t>& seeds, std::size_t jobs = 1);

AblationResult ablation_suite(const Graph& g, const LabelSet& truth, const Protocol& protocol,
                              const TrainConfig& base, const std::vector<std::uint64_t>& seeds,
                              std::size_t jobs = 1);

/// variant,seed,auroc,auprc,epochs,wall_s
void write_metrics_csv(std::ostream& out, const std::vector<AblationRow>& rows);

/// Wall-clock free, so identical runs serialize identically.
nlohmann::json report_to_json(const MetricsReport& report);
nlohmann::json ablation_to_json(const AblationResult& result);

}  // namespace gadforge
