// Copyright 2026 The tocomm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOCOMM_EXPERIMENT_H_
#define TOCOMM_EXPERIMENT_H_

// Experiment grid: regimes x channels x seeds, one CSV per run.
//
// Config files are plain text, one `dotted.key = value` per line, `#` starts
// a comment. Lists are comma separated and may be wrapped in brackets.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tocomm/channel.h"
#include "tocomm/data.h"
#include "tocomm/trainer.h"

namespace tocomm::exp {

struct DataSource {
  data::BlobSpec blobs;
  std::size_t test_per_class = 50;
  // When both are set the datasets are read from raw-tensor files instead.
  std::filesystem::path train_path;
  std::filesystem::path test_path;

  bool from_files() const { return !train_path.empty(); }
};

struct ExperimentConfig {
  std::vector<train::Regime> regimes = train::standard_regimes();
  std::vector<channel::ChannelConfig> channels;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<double> thresholds = {2.5, 2.0, 1.5, 1.0, 0.5};
  train::TrainConfig train;
  DataSource data;
  std::filesystem::path output_dir = "results";
  std::size_t threads = 1;

  // Six links: AWGN and Rayleigh at 0, 10 and 20 dB.
  static std::vector<channel::ChannelConfig> default_channels(
      const channel::ChannelConfig& base);
  void validate() const;
};

// Key/value pairs in file order.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Splits config text into entries. Throws ParseError (offset = line number).
ConfigEntries parse_entries(std::string_view text);

// Applies entries on top of the defaults. Unknown keys, duplicate keys, type
// mismatches and constraint violations raise ConfigError naming the key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig apply_entries(ExperimentConfig cfg, const ConfigEntries& entries);
ExperimentConfig load_config(const std::filesystem::path& path);

// Fully resolved config in the same key = value format; parse_config of the
// result reproduces the config.
std::string to_text(const ExperimentConfig& cfg);

// FNV-1a 64 of to_text(cfg), as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// CSV file name of a run, e.g. "sslft60_rayleigh_10db_s3.csv".
std::string run_file_name(const train::Regime& regime,
                          const channel::ChannelConfig& link, std::uint64_t seed);

// header `round,stage,epoch,train_loss,test_accuracy`
std::string records_to_csv(const std::vector<train::RoundRecord>& records);

struct Artifact {
  std::filesystem::path path;
  std::string regime;
  channel::ChannelConfig link;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::size_t rounds = 0;
};

struct ExperimentResult {
  std::vector<Artifact> artifacts;
  std::filesystem::path manifest;
};

using ProgressFn = std::function<void(const Artifact&)>;

// Runs every (regime, channel, seed) combination and writes the CSVs and
// "manifest.json" into cfg.output_dir. Runs sharing a seed and channel reuse
// one stage-I encoder.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const ProgressFn& progress = {});

// Train / test data for a seed.
data::BlobSplit load_data(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace tocomm::exp

#endif  // TOCOMM_EXPERIMENT_H_
