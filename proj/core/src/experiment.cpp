#include "gadforge/experiment.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "gadforge/error.hpp"

namespace gadforge {

namespace {

std::string shortest(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

nlohmann::json summary_json(const MetricSummary& s) {
  return {{"mean", s.mean}, {"std", s.stddev}, {"single_run", s.single_run}};
}

}  // namespace

SeedRun run_seed(const Graph& g, const LabelSet& truth, const Protocol& protocol,
                 TrainConfig cfg, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  cfg.seed = seed;
  SeedRun run;
  run.seed = seed;
  run.split = make_weak_split(g, truth, protocol.m, protocol.contamination, protocol.ratios, seed);
  run.result = train(g, truth, run.split, cfg);
  run.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < std::min(jobs, count); ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<Variant> ablation_variants(const TrainConfig& base) {
  std::vector<Variant> out;
  auto add = [&](std::string name, auto&& edit) {
    TrainConfig cfg = base;
    edit(cfg);
    out.push_back({std::move(name), cfg});
  };
  add("full", [](TrainConfig& c) { c.warmup = true; c.regularizer = true; });
  add("warmup_only", [](TrainConfig& c) { c.warmup = true; c.regularizer = false; });
  add("reg_only", [](TrainConfig& c) { c.warmup = false; c.regularizer = true; });
  add("baseline", [](TrainConfig& c) { c.warmup = false; c.regularizer = false; });
  for (const PerturbType t : kAllPerturbTypes)
    add("drop_tau" + std::to_string(static_cast<int>(t)),
        [t](TrainConfig& c) { c.perturb.enabled[type_index(t)] = false; });
  add("single_head", [](TrainConfig& c) { c.specialized_heads = false; });
  for (const double lambda : {0.0, 0.5, 1.0, 2.0, 4.0, 10.0, 20.0, 50.0, 100.0, 300.0})
    add("lambda_" + shortest(lambda), [lambda](TrainConfig& c) { c.lambda = lambda; });
  return out;
}

AblationResult run_variants(const Graph& g, const LabelSet& truth, const Protocol& protocol,
                            const std::vector<Variant>& variants,
                            const std::vector<std::uint64_t>& seeds, std::size_t jobs) {
  if (seeds.empty()) throw Error(ErrorKind::Config, "at least one seed is required");
  for (const auto& v : variants) v.cfg.validate();

  AblationResult result;
  result.rows.resize(variants.size() * seeds.size());
  parallel_for(result.rows.size(), jobs, [&](std::size_t i) {
    const Variant& v = variants[i / seeds.size()];
    const std::uint64_t seed = seeds[i % seeds.size()];
    const SeedRun run = run_seed(g, truth, protocol, v.cfg, seed);
    result.rows[i] = {v.name, seed, run.result.test, run.result.log.records.size(), run.wall_s};
  });
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    std::vector<RunMetrics> runs;
    for (std::size_t si = 0; si < seeds.size(); ++si)
      runs.push_back(result.rows[vi * seeds.size() + si].test);
    result.summaries.push_back(aggregate(variants[vi].name, seeds, runs));
  }
  return result;
}

AblationResult ablation_suite(const Graph& g, const LabelSet& truth, const Protocol& protocol,
                              const TrainConfig& base, const std::vector<std::uint64_t>& seeds,
                              std::size_t jobs) {
  return run_variants(g, truth, protocol, ablation_variants(base), seeds, jobs);
}

void write_metrics_csv(std::ostream& out, const std::vector<AblationRow>& rows) {
  out << "variant,seed,auroc,auprc,epochs,wall_s\n";
  for (const auto& r : rows)
    out << r.variant << ',' << r.seed << ',' << shortest(r.test.auroc) << ','
        << shortest(r.test.auprc) << ',' << r.epochs << ',' << shortest(r.wall_s) << '\n';
}

nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t i = 0; i < report.runs.size(); ++i)
    runs.push_back({{"seed", report.seeds.at(i)},
                    {"auroc", report.runs[i].auroc},
                    {"auprc", report.runs[i].auprc}});
  return {{"variant", report.variant},
          {"num_runs", report.runs.size()},
          {"auroc", summary_json(report.auroc)},
          {"auprc", summary_json(report.auprc)},
          {"runs", runs}};
}

nlohmann::json ablation_to_json(const AblationResult& result) {
  nlohmann::json variants = nlohmann::json::array();
  for (const auto& s : result.summaries) variants.push_back(report_to_json(s));
  return {{"version", 1}, {"variants", variants}};
}

}  // namespace gadforge
