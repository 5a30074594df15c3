#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <type_traits>

#include "gadforge/error.hpp"
#include "gadforge/graph_io.hpp"

namespace gadforge::cli {

namespace {

using nlohmann::json;

struct Field {
  const char* name;
  const char* help;
  std::function<json(const RunConfig&)> get;
  std::function<void(RunConfig&, const json&)> set;
};

template <typename M>
M convert(const char* name, const json& j) {
  auto fail = [&](const char* what) {
    throw Error(ErrorKind::Config, std::string("config key '") + name + "': expected " + what +
                                       ", got " + j.dump());
  };
  if constexpr (std::is_same_v<M, bool>) {
    if (!j.is_boolean()) fail("a boolean");
    return j.get<bool>();
  } else if constexpr (std::is_unsigned_v<M>) {
    if (!j.is_number_unsigned()) fail("a non-negative integer");
    return j.get<M>();
  } else if constexpr (std::is_floating_point_v<M>) {
    if (!j.is_number()) fail("a number");
    return j.get<M>();
  } else if constexpr (std::is_same_v<M, std::string>) {
    if (!j.is_string()) fail("a string");
    return j.get<std::string>();
  } else {
    if (!j.is_array()) fail("an array of integers");
    M out;
    for (const auto& x : j) {
      if (!x.is_number_integer()) fail("an array of integers");
      out.push_back(x.get<int>());
    }
    return out;
  }
}

template <typename M>
Field field(const char* name, const char* help, M RunConfig::*member) {
  return {name, help, [member](const RunConfig& c) { return json(c.*member); },
          [name, member](RunConfig& c, const json& j) { c.*member = convert<M>(name, j); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      field("dataset", "GAD text file; empty generates the planted benchmark", &RunConfig::dataset),
      field("benchmark_seed", "seed of the generated benchmark", &RunConfig::benchmark_seed),
      field("benchmark_communities", "benchmark community count", &RunConfig::benchmark_communities),
      field("benchmark_nodes_per_community", "nodes per community",
            &RunConfig::benchmark_nodes_per_community),
      field("benchmark_p_intra", "within-community edge probability", &RunConfig::benchmark_p_intra),
      field("benchmark_p_inter", "between-community edge probability", &RunConfig::benchmark_p_inter),
      field("benchmark_dim", "feature dimension", &RunConfig::benchmark_dim),
      field("benchmark_mean_scale", "std of community feature means", &RunConfig::benchmark_mean_scale),
      field("benchmark_noise_scale", "std of node features around the community mean",
            &RunConfig::benchmark_noise_scale),
      field("benchmark_anomaly_fraction", "fraction of planted anomalies",
            &RunConfig::benchmark_anomaly_fraction),
      field("seeds", "run seeds, \"A..B\" inclusive (16 runs by default)", &RunConfig::seeds),
      field("m", "labeled anomalies kept for training", &RunConfig::m),
      field("contamination", "hidden anomalies as a fraction of train normals",
            &RunConfig::contamination),
      field("split_train", "train fraction", &RunConfig::split_train),
      field("split_val", "validation fraction", &RunConfig::split_val),
      field("split_test", "test fraction", &RunConfig::split_test),
      field("lambda", "weight of the synthetic loss in the full phase", &RunConfig::lambda),
      field("s", "synthetic anomalies per perturbation type", &RunConfig::s),
      field("k", "candidate set size for dissimilarity search", &RunConfig::k),
      field("real_batch", "real batch size (half anomalies, half pool)", &RunConfig::real_batch),
      field("warmup_epochs", "warm-up epochs", &RunConfig::warmup_epochs),
      field("epochs", "full-phase epochs", &RunConfig::epochs),
      field("steps_per_epoch", "real-batch updates per full-phase epoch", &RunConfig::steps_per_epoch),
      field("lr", "Adam learning rate", &RunConfig::lr),
      field("weight_decay", "L2 coefficient on weights", &RunConfig::weight_decay),
      field("hidden", "encoder and head width", &RunConfig::hidden),
      field("warmup", "run the warm-up phase", &RunConfig::warmup),
      field("regularizer", "keep the synthetic loss in the full phase", &RunConfig::regularizer),
      field("specialized_heads", "one synthetic head per type (false shares one head)",
            &RunConfig::specialized_heads),
      field("types", "enabled perturbation types, subset of 1..5", &RunConfig::types),
      field("reset_adam", "reset Adam moments between phases", &RunConfig::reset_adam),
      field("standardize", "z-score features before training", &RunConfig::standardize),
      field("out", "output directory", &RunConfig::out),
      field("jobs", "parallel runs for train and ablate", &RunConfig::jobs),
  };
  return table;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  auto number = [&](std::string_view part) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size())
      throw Error(ErrorKind::Config, "invalid seed range '" + text + "' (expected A..B)");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {number(text)};
  const std::uint64_t lo = number(std::string_view(text).substr(0, dots));
  const std::uint64_t hi = number(std::string_view(text).substr(dots + 2));
  if (hi < lo) throw Error(ErrorKind::Config, "seed range '" + text + "' is empty");
  if (hi - lo >= 100000) throw Error(ErrorKind::Config, "seed range '" + text + "' is too large");
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.warmup_epochs = warmup_epochs;
  t.epochs = epochs;
  t.lr = lr;
  t.weight_decay = weight_decay;
  t.lambda = lambda;
  t.perturb.per_type = s;
  t.perturb.candidates = k;
  t.perturb.enabled.fill(false);
  for (const int type : types)
    if (type >= 1 && type <= static_cast<int>(kNumPerturbTypes))
      t.perturb.enabled[static_cast<std::size_t>(type - 1)] = true;
  t.real_batch = real_batch;
  t.hidden = hidden;
  t.steps_per_epoch = steps_per_epoch;
  t.warmup = warmup;
  t.regularizer = regularizer;
  t.specialized_heads = specialized_heads;
  t.reset_adam_between_phases = reset_adam;
  t.standardize = standardize;
  return t;
}

Protocol RunConfig::protocol() const {
  return {m, contamination, SplitRatios{split_train, split_val, split_test}};
}

BenchmarkConfig RunConfig::benchmark() const {
  BenchmarkConfig b;
  b.communities = benchmark_communities;
  b.nodes_per_community = benchmark_nodes_per_community;
  b.p_intra = benchmark_p_intra;
  b.p_inter = benchmark_p_inter;
  b.dim = benchmark_dim;
  b.mean_scale = benchmark_mean_scale;
  b.noise_scale = benchmark_noise_scale;
  b.anomaly_fraction = benchmark_anomaly_fraction;
  return b;
}

std::vector<std::uint64_t> RunConfig::seed_list() const { return parse_seed_range(seeds); }

void RunConfig::validate() const {
  for (const int type : types)
    if (type < 1 || type > static_cast<int>(kNumPerturbTypes))
      throw Error(ErrorKind::Config, "types must be drawn from 1..5, got " + std::to_string(type));
  if (jobs == 0) throw Error(ErrorKind::Config, "jobs must be >= 1");
  if (contamination < 0.0 || contamination > 1.0)
    throw Error(ErrorKind::Config, "contamination must lie in [0, 1]");
  if (split_train <= 0.0 || split_val < 0.0 || split_test < 0.0 ||
      std::abs(split_train + split_val + split_test - 1.0) > 1e-9)
    throw Error(ErrorKind::Config, "split fractions must be non-negative and sum to 1");
  seed_list();
  if (dataset.empty()) benchmark().validate();
  TrainConfig t = train_config();
  t.validate();
}

std::vector<KeyInfo> config_keys() {
  const RunConfig defaults;
  std::vector<KeyInfo> out;
  for (const auto& f : fields()) out.push_back({f.name, f.help, f.get(defaults)});
  return out;
}

json to_json(const RunConfig& cfg) {
  json doc = json::object();
  for (const auto& f : fields()) doc[f.name] = f.get(cfg);
  return doc;
}

RunConfig from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    const Field* match = nullptr;
    for (const auto& f : fields())
      if (key == f.name) match = &f;
    if (!match) throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
    match->set(cfg, value);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, "malformed config " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

Dataset load_dataset(const RunConfig& cfg) {
  if (!cfg.dataset.empty()) return load_graph(cfg.dataset);
  return gen_benchmark(cfg.benchmark(), cfg.benchmark_seed);
}

}  // namespace gadforge::cli
