#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gadforge/embeddings.hpp"
#include "gadforge/error.hpp"
#include "gadforge/gradcheck.hpp"
#include "gadforge/graph_io.hpp"
#include "gadforge/ledger_json.hpp"
#include "run_config.hpp"

namespace gadforge::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Overrides {
  std::string config_path;
  std::optional<std::string> dataset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> seeds;
  std::optional<double> lambda;
  std::optional<std::size_t> m;
  std::optional<double> contamination;
  bool no_warmup = false;
  bool no_regularizer = false;
  bool single_head = false;
  std::vector<int> drop_tau;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
};

void add_common(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_path, "JSON config; flags override its values");
  cmd.add_option("--dataset", o.dataset, "GAD text file (default: planted benchmark)");
  cmd.add_option("--seed", o.seed, "single run seed");
  cmd.add_option("--seeds", o.seeds, "seed range A..B, inclusive");
  cmd.add_option("--lambda", o.lambda, "synthetic loss weight");
  cmd.add_option("--m", o.m, "labeled anomalies");
  cmd.add_option("--contamination", o.contamination, "hidden anomaly rate of the pool");
  cmd.add_flag("--no-warmup", o.no_warmup, "skip the warm-up phase");
  cmd.add_flag("--no-regularizer", o.no_regularizer, "drop the synthetic loss in the full phase");
  cmd.add_option("--drop-tau", o.drop_tau, "disable perturbation type (repeatable)")
      ->check(CLI::Range(1, 5));
  cmd.add_flag("--single-head", o.single_head, "share one synthetic head across types");
  cmd.add_option("--out", o.out, "output directory");
  cmd.add_option("--jobs", o.jobs, "parallel runs")->check(CLI::PositiveNumber);
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.dataset) cfg.dataset = *o.dataset;
  if (o.seeds) cfg.seeds = *o.seeds;
  if (o.seed) cfg.seeds = std::to_string(*o.seed);
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.m) cfg.m = *o.m;
  if (o.contamination) cfg.contamination = *o.contamination;
  if (o.no_warmup) cfg.warmup = false;
  if (o.no_regularizer) cfg.regularizer = false;
  if (o.single_head) cfg.specialized_heads = false;
  for (const int t : o.drop_tau) std::erase(cfg.types, t);
  if (o.out) cfg.out = *o.out;
  if (o.jobs) cfg.jobs = *o.jobs;
  cfg.validate();
  return cfg;
}

std::string config_help() {
  std::ostringstream os;
  os << "\nConfig keys (JSON, with defaults):\n";
  for (const auto& key : config_keys())
    os << "  " << std::left << std::setw(32) << key.name << std::setw(16) << key.default_value.dump()
       << key.help << '\n';
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

fs::path make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

json metrics_json(const RunMetrics& m) { return {{"auroc", m.auroc}, {"auprc", m.auprc}}; }

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = make_dir(cfg.out);
  PerturbationLedger planted;
  const Dataset ds = gen_benchmark(cfg.benchmark(), cfg.benchmark_seed, &planted);
  save_graph(dir / "benchmark.gad", ds.graph, ds.labels);
  write_json(dir / "planted_ledger.json", ledger_to_json(planted));
  out << "wrote " << (dir / "benchmark.gad").string() << ": " << ds.graph.num_nodes() << " nodes, "
      << ds.graph.num_edges() << " edges, " << ds.labels.anomalies().size() << " anomalies\n";
  return kOk;
}

int cmd_inject(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = make_dir(cfg.out);
  const Dataset ds = load_dataset(cfg);
  const std::uint64_t seed = cfg.seed_list().front();
  const Protocol p = cfg.protocol();
  const WeakSplit split = make_weak_split(ds.graph, ds.labels, p.m, p.contamination, p.ratios, seed);
  const TrainConfig t = cfg.train_config();
  TrainStreams streams(seed);
  Injection inj = inject_all(ds.graph, split.unlabeled_pool, t.perturb, streams.synthetic);
  sample_synth_batches(inj.ledger, split, streams.synthetic);
  save_graph(dir / "perturbed.gad", inj.graph, ds.labels);
  write_json(dir / "ledger.json", ledger_to_json(inj.ledger));
  out << "wrote " << (dir / "perturbed.gad").string() << " and ledger.json ("
      << inj.ledger.all_perturbed().size() << " perturbed nodes)\n";
  return kOk;
}

json seed_metrics(const SeedRun& run) {
  return {{"seed", run.seed},
          {"best_epoch", run.result.log.best_epoch},
          {"val", metrics_json(run.result.val)},
          {"test", metrics_json(run.result.test)}};
}

int cmd_train(const RunConfig& cfg, bool embeddings, std::ostream& out, std::ostream& err) {
  const fs::path dir = make_dir(cfg.out);
  const Dataset ds = load_dataset(cfg);
  const TrainConfig t = cfg.train_config();
  const std::vector<std::uint64_t> seeds = cfg.seed_list();
  write_json(dir / "config.json", to_json(cfg));

  std::vector<RunMetrics> tests(seeds.size());
  std::mutex log_mutex;
  parallel_for(seeds.size(), cfg.jobs, [&](std::size_t i) {
    const SeedRun run = run_seed(ds.graph, ds.labels, cfg.protocol(), t, seeds[i]);
    const fs::path sub = make_dir(dir / ("seed_" + std::to_string(seeds[i])));
    RunConfig resolved = cfg;
    resolved.seeds = std::to_string(seeds[i]);
    write_json(sub / "config.json", to_json(resolved));
    std::ostringstream csv;
    run.result.log.write_csv(csv);
    write_text(sub / "runlog.csv", csv.str());
    save_checkpoint(sub / "checkpoint_best", run.result.best);
    write_json(sub / "metrics.json", seed_metrics(run));
    if (embeddings) {
      const Graph g = t.standardize ? standardize_features(ds.graph) : ds.graph;
      export_embeddings(sub / "embeddings.csv", g, run.result.best.params, ds.labels);
    }
    tests[i] = run.result.test;
    const std::lock_guard lock(log_mutex);
    err << "seed " << seeds[i] << ": test auroc " << run.result.test.auroc << " auprc "
        << run.result.test.auprc << " (best epoch " << run.result.log.best_epoch << ")\n";
  });

  const MetricsReport report = aggregate("train", seeds, tests);
  write_json(dir / "metrics.json", report_to_json(report));
  out << "auroc " << report.auroc.mean << " +- " << report.auroc.stddev << ", auprc "
      << report.auprc.mean << " +- " << report.auprc.stddev << " over " << seeds.size()
      << " run(s); results in " << dir.string() << '\n';
  return kOk;
}

int cmd_eval(const RunConfig& cfg, const std::string& checkpoint, const std::string& part,
             bool explicit_out, std::ostream& out) {
  const Dataset ds = load_dataset(cfg);
  const std::uint64_t seed = cfg.seed_list().front();
  const Protocol p = cfg.protocol();
  const WeakSplit split = make_weak_split(ds.graph, ds.labels, p.m, p.contamination, p.ratios, seed);
  const Checkpoint<float> ckpt = load_checkpoint<float>(checkpoint);
  if (ckpt.params.shape.input_dim != ds.graph.dim())
    throw Error(ErrorKind::Contract, "checkpoint expects feature dimension " +
                                         std::to_string(ckpt.params.shape.input_dim) +
                                         ", dataset has " + std::to_string(ds.graph.dim()));
  const Graph g = cfg.standardize ? standardize_features(ds.graph) : ds.graph;
  const std::vector<NodeId>& nodes = part == "val" ? split.val : split.test;
  const RunMetrics m = evaluate_nodes(g, ckpt.params.weights, ds.labels, nodes);
  const json doc = {{"seed", seed}, {"split", part}, {"nodes", nodes.size()},
                    {"auroc", m.auroc}, {"auprc", m.auprc}};
  out << doc.dump(2) << '\n';
  if (explicit_out) write_json(make_dir(cfg.out) / "eval.json", doc);
  return kOk;
}

int cmd_ablate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path dir = make_dir(cfg.out);
  const Dataset ds = load_dataset(cfg);
  const std::vector<std::uint64_t> seeds = cfg.seed_list();
  write_json(dir / "config.json", to_json(cfg));
  err << "running 20 variants x " << seeds.size() << " seeds on " << cfg.jobs << " job(s)\n";
  const AblationResult result =
      ablation_suite(ds.graph, ds.labels, cfg.protocol(), cfg.train_config(), seeds, cfg.jobs);
  std::ostringstream csv;
  write_metrics_csv(csv, result.rows);
  write_text(dir / "ablation.csv", csv.str());
  write_json(dir / "ablation.json", ablation_to_json(result));
  for (const auto& s : result.summaries)
    out << std::left << std::setw(14) << s.variant << " auroc " << std::fixed << std::setprecision(4)
        << s.auroc.mean << " +- " << s.auroc.stddev << "  auprc " << s.auprc.mean << " +- "
        << s.auprc.stddev << '\n';
  return kOk;
}

int cmd_gradcheck(const RunConfig& cfg, double tolerance, std::ostream& out) {
  GradCheckSetup setup;
  setup.seed = cfg.seed_list().front();
  setup.lambda = cfg.lambda;
  const GradCheckReport report = grad_check_random(setup);
  for (const auto& g : report.groups) {
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %5zu coords  max rel %.3e  max abs %.3e\n", g.name.c_str(),
                  g.coordinates, g.max_relative_error, g.max_absolute_error);
    out << line;
  }
  const bool ok = report.passed(tolerance);
  out << (ok ? "PASS" : "FAIL") << ": worst relative error " << report.worst() << " (tolerance "
      << tolerance << ")\n";
  return ok ? kOk : kGradCheckFailed;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kConfigError;
    case ErrorKind::Parse: return kParseError;
    case ErrorKind::Io: return kIoError;
    case ErrorKind::Contract: return kContractError;
    case ErrorKind::Saturation: return kSaturationError;
    case ErrorKind::Split: return kSplitError;
    case ErrorKind::Injection: return kInjectionError;
    case ErrorKind::Metric: return kMetricError;
    case ErrorKind::Numeric: return kNumericError;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakly supervised graph anomaly detection with synthetic anomalies", "gadforge"};
  app.require_subcommand(1);
  app.footer(config_help());

  Overrides o;
  CLI::App* gen = app.add_subcommand("gen", "write a planted benchmark dataset");
  CLI::App* inject = app.add_subcommand("inject", "write a perturbed graph and its ledger");
  CLI::App* train = app.add_subcommand("train", "two-phase training; writes a run directory");
  CLI::App* eval = app.add_subcommand("eval", "score a checkpoint on a dataset split");
  CLI::App* ablate = app.add_subcommand("ablate", "run the 20-variant ablation suite");
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient report");
  for (CLI::App* cmd : {gen, inject, train, eval, ablate, gradcheck}) {
    add_common(*cmd, o);
    cmd->footer(config_help());
  }
  bool embeddings = false;
  train->add_flag("--embeddings", embeddings, "also export embeddings.csv per seed");
  std::string checkpoint;
  std::string part = "test";
  eval->add_option("--checkpoint", checkpoint, "checkpoint_best file")->required();
  eval->add_option("--split", part, "val or test")->check(CLI::IsMember({"val", "test"}));
  double tolerance = 1e-4;
  gradcheck->add_option("--tolerance", tolerance, "maximum relative error");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig cfg = resolve(o);
    if (gen->parsed()) return cmd_gen(cfg, out);
    if (inject->parsed()) return cmd_inject(cfg, out);
    if (train->parsed()) return cmd_train(cfg, embeddings, out, err);
    if (eval->parsed()) return cmd_eval(cfg, checkpoint, part, o.out.has_value(), out);
    if (ablate->parsed()) return cmd_ablate(cfg, out, err);
    return cmd_gradcheck(cfg, tolerance, out);
  } catch (const Error& e) {
    err << "gadforge: " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "gadforge: internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace gadforge::cli
