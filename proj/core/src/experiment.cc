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

#include "tocomm/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tocomm/errors.h"
#include "tocomm/io.h"

namespace tocomm::exp {
namespace {

using Setter = void (*)(ExperimentConfig&, const std::string& key, std::string_view);
using Getter = std::string (*)(const ExperimentConfig&);

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<std::string_view> items;
  if (text.empty()) return items;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    items.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

double to_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected a number, got '" + std::string(text) + "'", key);
  }
  return value;
}

std::uint64_t to_u64(const std::string& key, std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(
        key + ": expected a non-negative integer, got '" + std::string(text) + "'", key);
  }
  return value;
}

std::size_t to_size(const std::string& key, std::string_view text) {
  return static_cast<std::size_t>(to_u64(key, text));
}

bool to_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + std::string(text) + "'",
                    key);
}

std::vector<std::size_t> to_sizes(const std::string& key, std::string_view text) {
  std::vector<std::size_t> out;
  for (auto item : split_list(text)) out.push_back(to_size(key, item));
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_bool(bool v) { return v ? "true" : "false"; }

template <typename T>
std::string fmt_list(const std::vector<T>& values, std::string (*fmt)(const T&)) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt(values[i]);
  }
  return out;
}

std::string fmt_size(const std::size_t& v) { return std::to_string(v); }
std::string fmt_u64(const std::uint64_t& v) { return std::to_string(v); }
std::string fmt_double_ref(const double& v) { return fmt_double(v); }
std::string fmt_regime(const train::Regime& r) { return r.name; }
std::string fmt_link(const channel::ChannelConfig& c) {
  return std::string(channel::to_string(c.kind)) + ":" + fmt_double(c.snr_db);
}

channel::ChannelConfig parse_link(const std::string& key, std::string_view item,
                                  const channel::ChannelConfig& base) {
  const auto colon = item.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError(key + ": expected kind:snr_db, got '" + std::string(item) + "'", key);
  }
  channel::ChannelConfig link = base;
  try {
    link.kind = channel::parse_kind(trim(item.substr(0, colon)));
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what(), key);
  }
  link.snr_db = to_double(key, item.substr(colon + 1));
  return link;
}

struct KeySpec {
  const char* name;
  Setter set;
  Getter get;  // null for keys folded into another key on output
};

#define TOCOMM_NUM(KEY, FIELD, CONV, FMT)                                              \
  KeySpec {                                                                             \
    KEY, [](ExperimentConfig& c, const std::string& k, std::string_view v) {          \
      c.FIELD = CONV(k, v);                                                             \
    },                                                                                  \
        [](const ExperimentConfig& c) -> std::string { return FMT(c.FIELD); }           \
  }

std::string fmt_sz(std::size_t v) { return std::to_string(v); }

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"experiment.regimes",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.regimes.clear();
         for (auto item : split_list(v)) {
           try {
             c.regimes.push_back(train::parse_regime(item));
           } catch (const ConfigError& e) {
             throw ConfigError(k + ": " + e.what(), k);
           }
         }
       },
       [](const ExperimentConfig& c) { return fmt_list(c.regimes, fmt_regime); }},
      {"experiment.channels",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.channels.clear();
         for (auto item : split_list(v)) c.channels.push_back(parse_link(k, item, c.train.channel));
       },
       [](const ExperimentConfig& c) { return fmt_list(c.channels, fmt_link); }},
      {"experiment.seeds",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.seeds.clear();
         for (auto item : split_list(v)) c.seeds.push_back(to_u64(k, item));
       },
       [](const ExperimentConfig& c) { return fmt_list(c.seeds, fmt_u64); }},
      {"experiment.thresholds",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.thresholds.clear();
         for (auto item : split_list(v)) c.thresholds.push_back(to_double(k, item));
       },
       [](const ExperimentConfig& c) { return fmt_list(c.thresholds, fmt_double_ref); }},
      {"experiment.output_dir",
       [](ExperimentConfig& c, const std::string&, std::string_view v) {
         c.output_dir = std::string(trim(v));
       },
       [](const ExperimentConfig& c) { return c.output_dir.string(); }},
      TOCOMM_NUM("experiment.threads", threads, to_size, fmt_sz),
      TOCOMM_NUM("train.pretrain_epochs", train.pretrain_epochs, to_size, fmt_sz),
      TOCOMM_NUM("train.finetune_epochs", train.finetune_epochs, to_size, fmt_sz),
      TOCOMM_NUM("train.batch_size", train.batch_size, to_size, fmt_sz),
      TOCOMM_NUM("train.max_rounds", train.max_rounds, to_size, fmt_sz),
      TOCOMM_NUM("train.learning_rate", train.sgd.learning_rate, to_double, fmt_double),
      TOCOMM_NUM("train.momentum", train.sgd.momentum, to_double, fmt_double),
      TOCOMM_NUM("loss.temperature", train.infonce.temperature, to_double, fmt_double),
      TOCOMM_NUM("loss.exclude_self", train.infonce.exclude_self, to_bool, fmt_bool),
      // channel.kind and channel.snr_db select a single link; they are
      // written back out as experiment.channels.
      {"channel.kind",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         try {
           c.train.channel.kind = channel::parse_kind(trim(v));
         } catch (const ConfigError& e) {
           throw ConfigError(k + ": " + e.what(), k);
         }
       },
       nullptr},
      {"channel.snr_db",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.train.channel.snr_db = to_double(k, v);
       },
       nullptr},
      TOCOMM_NUM("channel.power", train.channel.power, to_double, fmt_double),
      TOCOMM_NUM("channel.equalize", train.channel.equalize, to_bool, fmt_bool),
      TOCOMM_NUM("channel.eq_epsilon", train.channel.eq_epsilon, to_double, fmt_double),
      {"model.hidden_dims",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.train.encoder.hidden_dims = to_sizes(k, v);
       },
       [](const ExperimentConfig& c) { return fmt_list(c.train.encoder.hidden_dims, fmt_size); }},
      {"model.receiver_hidden_dims",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.train.receiver.hidden_dims = to_sizes(k, v);
       },
       [](const ExperimentConfig& c) { return fmt_list(c.train.receiver.hidden_dims, fmt_size); }},
      TOCOMM_NUM("model.feature_dim", train.encoder.feature_dim, to_size, fmt_sz),
      TOCOMM_NUM("model.num_classes", train.receiver.num_classes, to_size, fmt_sz),
      TOCOMM_NUM("data.classes", data.blobs.classes, to_size, fmt_sz),
      TOCOMM_NUM("data.per_class", data.blobs.per_class, to_size, fmt_sz),
      TOCOMM_NUM("data.dim", data.blobs.dim, to_size, fmt_sz),
      TOCOMM_NUM("data.separation", data.blobs.separation, to_double, fmt_double),
      TOCOMM_NUM("data.test_per_class", data.test_per_class, to_size, fmt_sz),
      {"data.train_path",
       [](ExperimentConfig& c, const std::string&, std::string_view v) {
         c.data.train_path = std::string(trim(v));
       },
       [](const ExperimentConfig& c) { return c.data.train_path.string(); }},
      {"data.test_path",
       [](ExperimentConfig& c, const std::string&, std::string_view v) {
         c.data.test_path = std::string(trim(v));
       },
       [](const ExperimentConfig& c) { return c.data.test_path.string(); }},
      TOCOMM_NUM("augment.jitter_sigma", train.augment.jitter_sigma, to_double, fmt_double),
      TOCOMM_NUM("augment.mask_prob", train.augment.mask_prob, to_double, fmt_double),
      TOCOMM_NUM("augment.scale_lo", train.augment.scale_lo, to_double, fmt_double),
      TOCOMM_NUM("augment.scale_hi", train.augment.scale_hi, to_double, fmt_double),
  };
  return specs;
}

#undef TOCOMM_NUM

const KeySpec* find_key(std::string_view name) {
  for (const auto& s : key_specs()) {
    if (name == s.name) return &s;
  }
  return nullptr;
}

// Derived fields that must agree across modules.
void resolve(ExperimentConfig& cfg, bool classes_given, bool num_classes_given) {
  if (num_classes_given && !classes_given) {
    cfg.data.blobs.classes = cfg.train.receiver.num_classes;
  } else if (num_classes_given && cfg.train.receiver.num_classes != cfg.data.blobs.classes) {
    throw ConfigError("model.num_classes disagrees with data.classes", "model.num_classes");
  } else {
    cfg.train.receiver.num_classes = cfg.data.blobs.classes;
  }
  cfg.train.encoder.input_dim = cfg.data.blobs.dim;
  cfg.train.receiver.feature_dim = cfg.train.encoder.feature_dim;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<channel::ChannelConfig> ExperimentConfig::default_channels(
    const channel::ChannelConfig& base) {
  std::vector<channel::ChannelConfig> out;
  for (auto kind : {channel::Kind::kAwgn, channel::Kind::kRayleigh}) {
    for (double snr : {0.0, 10.0, 20.0}) {
      channel::ChannelConfig c = base;
      c.kind = kind;
      c.snr_db = snr;
      out.push_back(c);
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (regimes.empty()) throw ConfigError("no regimes selected", "experiment.regimes");
  if (channels.empty()) throw ConfigError("no channels selected", "experiment.channels");
  if (seeds.empty()) throw ConfigError("no seeds selected", "experiment.seeds");
  if (thresholds.empty()) {
    throw ConfigError("thresholds list must not be empty", "experiment.thresholds");
  }
  for (double t : thresholds) {
    if (!std::isfinite(t)) {
      throw ConfigError("thresholds must be finite", "experiment.thresholds");
    }
  }
  if (threads == 0) throw ConfigError("threads must be >= 1", "experiment.threads");
  if (output_dir.empty()) throw ConfigError("output_dir is empty", "experiment.output_dir");
  for (const auto& r : regimes) r.validate();
  for (const auto& c : channels) c.validate();
  train.validate();
  if (data.from_files() != !data.test_path.empty()) {
    throw ConfigError("data.train_path and data.test_path must be given together",
                      "data.test_path");
  }
  if (!data.from_files()) {
    data.blobs.validate();
    if (data.test_per_class == 0) {
      throw ConfigError("test_per_class must be >= 1", "data.test_per_class");
    }
  }
}

ConfigEntries parse_entries(std::string_view text) {
  ConfigEntries entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("config line " + std::to_string(line_no) +
                             ": expected 'key = value'",
                         line_no);
      }
      const auto key = trim(line.substr(0, eq));
      if (key.empty()) {
        throw ParseError("config line " + std::to_string(line_no) + ": empty key", line_no);
      }
      entries.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return entries;
}

ExperimentConfig apply_entries(ExperimentConfig cfg, const ConfigEntries& entries) {
  std::vector<std::string> seen;
  bool classes_given = false, num_classes_given = false, single_link = false,
       channels_given = false;
  // experiment.channels reads channel.* for power and equalizer settings, so
  // it is applied after every other key.
  const std::pair<std::string, std::string>* channels_entry = nullptr;
  for (const auto& [key, value] : entries) {
    const KeySpec* spec = find_key(key);
    if (spec == nullptr) throw ConfigError("unknown config key '" + key + "'", key);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError("duplicate config key '" + key + "'", key);
    }
    seen.push_back(key);
    if (key == "experiment.channels") {
      channels_entry = &*std::find_if(entries.begin(), entries.end(),
                                      [&](const auto& e) { return e.first == key; });
      channels_given = true;
      continue;
    }
    spec->set(cfg, key, value);
    classes_given |= key == "data.classes";
    num_classes_given |= key == "model.num_classes";
    single_link |= key == "channel.kind" || key == "channel.snr_db";
  }
  if (channels_given && single_link) {
    throw ConfigError("channel.kind/channel.snr_db conflict with experiment.channels",
                      "experiment.channels");
  }
  if (channels_given) {
    find_key("experiment.channels")->set(cfg, channels_entry->first, channels_entry->second);
  } else if (single_link) {
    cfg.channels = {cfg.train.channel};
  } else {
    // Carry channel.* settings into every link.
    for (auto& link : cfg.channels) {
      const auto kind = link.kind;
      const double snr = link.snr_db;
      link = cfg.train.channel;
      link.kind = kind;
      link.snr_db = snr;
    }
  }
  if (cfg.channels.empty() && !channels_given) {
    cfg.channels = ExperimentConfig::default_channels(cfg.train.channel);
  }
  resolve(cfg, classes_given, num_classes_given);
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(std::string_view text) {
  return apply_entries(ExperimentConfig{}, parse_entries(text));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_text(path));
}

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& spec : key_specs()) {
    if (spec.get == nullptr) continue;
    out += spec.name;
    out += " = ";
    out += spec.get(cfg);
    out += '\n';
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) { return hex16(fnv1a(to_text(cfg))); }

std::string run_file_name(const train::Regime& regime,
                          const channel::ChannelConfig& link, std::uint64_t seed) {
  return train::regime_slug(regime) + "_" + std::string(channel::to_string(link.kind)) +
         "_" + fmt_double(link.snr_db) + "db_s" + std::to_string(seed) + ".csv";
}

std::string records_to_csv(const std::vector<train::RoundRecord>& records) {
  std::string out = "round,stage,epoch,train_loss,test_accuracy\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%zu,%.10g,", r.round,
                  std::string(train::to_string(r.stage)).c_str(), r.epoch, r.train_loss);
    out += buf;
    if (r.test_accuracy) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.test_accuracy);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

data::BlobSplit load_data(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.data.from_files()) {
    data::BlobSplit split{data::load_raw(cfg.data.train_path),
                          data::load_raw(cfg.data.test_path)};
    if (split.train.dim() != cfg.train.encoder.input_dim ||
        split.test.dim() != cfg.train.encoder.input_dim) {
      throw ConfigError("dataset dimension does not match data.dim", "data.dim");
    }
    if (split.train.num_classes != cfg.train.receiver.num_classes ||
        split.test.num_classes != cfg.train.receiver.num_classes) {
      throw ConfigError("dataset class count does not match data.classes", "data.classes");
    }
    return split;
  }
  return data::make_blob_split(cfg.data.blobs, cfg.data.test_per_class, seed);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " +
                  ec.message());
  }

  struct Task {
    std::uint64_t seed;
    std::size_t channel;
  };
  std::vector<Task> tasks;
  for (auto seed : cfg.seeds)
    for (std::size_t c = 0; c < cfg.channels.size(); ++c) tasks.push_back({seed, c});

  const std::size_t per_task = cfg.regimes.size();
  std::vector<Artifact> artifacts(tasks.size() * per_task);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      try {
        const Task& task = tasks[t];
        const data::BlobSplit split = load_data(cfg, task.seed);
        train::TrainConfig tc = cfg.train;
        tc.seed = task.seed;
        tc.channel = cfg.channels[task.channel];
        train::PretrainCache cache;
        for (std::size_t r = 0; r < per_task; ++r) {
          const auto& regime = cfg.regimes[r];
          const train::RunResult result =
              train::run_regime(regime, split.train, split.test, tc, &cache);
          Artifact a;
          a.path = cfg.output_dir / run_file_name(regime, tc.channel, task.seed);
          a.regime = regime.name;
          a.link = tc.channel;
          a.seed = task.seed;
          a.rows = result.records.size();
          a.rounds = result.link.rounds;
          io::write_file_atomic(a.path, records_to_csv(result.records));
          std::lock_guard lock(mu);
          artifacts[t * per_task + r] = a;
          if (progress) progress(a);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t n_threads = std::min(cfg.threads, tasks.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  nlohmann::ordered_json manifest;
  manifest["config_hash"] = config_hash(cfg);
  manifest["created_utc"] = utc_timestamp();
  manifest["config"] = to_text(cfg);
  auto& list = manifest["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) {
    list.push_back({{"file", a.path.filename().string()},
                    {"regime", a.regime},
                    {"channel", std::string(channel::to_string(a.link.kind))},
                    {"snr_db", a.link.snr_db},
                    {"seed", a.seed},
                    {"rows", a.rows},
                    {"rounds", a.rounds},
                    {"config_hash", config_hash(cfg)}});
  }
  ExperimentResult result;
  result.artifacts = std::move(artifacts);
  result.manifest = cfg.output_dir / "manifest.json";
  io::write_file_atomic(result.manifest, manifest.dump(2) + "\n");
  return result;
}

}  // namespace tocomm::exp
