#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gadforge/experiment.hpp"
#include "gadforge/planted_benchmark.hpp"

namespace gadforge::cli {

/// Everything a command needs, as one flat JSON document.
struct RunConfig {
  std::string dataset;  // GAD file; empty selects the planted benchmark
  std::uint64_t benchmark_seed = 0;
  std::size_t benchmark_communities = 4;
  std::size_t benchmark_nodes_per_community = 250;
  double benchmark_p_intra = 0.02;
  double benchmark_p_inter = 0.001;
  std::size_t benchmark_dim = 16;
  double benchmark_mean_scale = 1.0;
  double benchmark_noise_scale = 1.0;
  double benchmark_anomaly_fraction = 0.05;

  std::string seeds = "0..15";
  std::size_t m = 30;
  double contamination = 0.01;
  double split_train = 0.8;
  double split_val = 0.1;
  double split_test = 0.1;

  double lambda = 4.0;
  std::size_t s = 32;
  std::size_t k = 4096;
  std::size_t real_batch = 512;
  std::size_t warmup_epochs = 100;
  std::size_t epochs = 200;
  std::size_t steps_per_epoch = 1;
  double lr = 0.001;
  double weight_decay = 0.01;
  std::size_t hidden = 64;
  bool warmup = true;
  bool regularizer = true;
  bool specialized_heads = true;
  std::vector<int> types{1, 2, 3, 4, 5};
  bool reset_adam = false;
  bool standardize = false;

  std::string out = "gadforge_out";
  std::size_t jobs = 1;

  TrainConfig train_config() const;
  Protocol protocol() const;
  BenchmarkConfig benchmark() const;
  std::vector<std::uint64_t> seed_list() const;
  void validate() const;
};

struct KeyInfo {
  std::string name;
  std::string help;
  nlohmann::json default_value;
};

/// Every config key in document order, with its default.
std::vector<KeyInfo> config_keys();

nlohmann::json to_json(const RunConfig& cfg);
/// Starts from defaults; unknown keys and mistyped values are config errors.
RunConfig from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// "A..B" (inclusive) or a single integer.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

/// Loads `dataset`, or generates the planted benchmark.
Dataset load_dataset(const RunConfig& cfg);

}  // namespace gadforge::cli
