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

// tocomm: experiment runner, report generator and verifier.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef TOCOMM_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "tocomm/data.h"
#include "tocomm/errors.h"
#include "tocomm/experiment.h"
#include "tocomm/infotheory.h"
#include "tocomm/io.h"
#include "tocomm/report.h"

namespace {

namespace fs = std::filesystem;
using tocomm::exp::ConfigEntries;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> snr;
  std::string channel;
  std::vector<std::string> regimes;
  std::optional<std::size_t> threads;
};

void set_entry(ConfigEntries& entries, const std::string& key, const std::string& value) {
  std::erase_if(entries, [&](const auto& e) { return e.first == key; });
  entries.emplace_back(key, value);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Config file entries with command-line flags layered on top.
tocomm::exp::ExperimentConfig resolve_config(const Common& c) {
  ConfigEntries entries;
  if (!c.config.empty()) entries = tocomm::exp::parse_entries(tocomm::io::read_text(c.config));
  if (c.seed) set_entry(entries, "experiment.seeds", std::to_string(*c.seed));
  if (!c.out.empty()) set_entry(entries, "experiment.output_dir", c.out);
  if (c.threads) set_entry(entries, "experiment.threads", std::to_string(*c.threads));
  if (!c.regimes.empty()) {
    std::string list;
    for (const auto& r : c.regimes) list += (list.empty() ? "" : ",") + r;
    set_entry(entries, "experiment.regimes", list);
  }
  if (c.snr || !c.channel.empty()) {
    std::vector<std::string> kinds =
        c.channel.empty() ? std::vector<std::string>{"awgn", "rayleigh"}
                          : std::vector<std::string>{c.channel};
    std::vector<double> snrs = c.snr ? std::vector<double>{*c.snr}
                                     : std::vector<double>{0.0, 10.0, 20.0};
    std::string list;
    for (const auto& k : kinds)
      for (double s : snrs) list += (list.empty() ? "" : ",") + k + ":" + fmt(s);
    std::erase_if(entries, [](const auto& e) {
      return e.first == "channel.kind" || e.first == "channel.snr_db";
    });
    set_entry(entries, "experiment.channels", list);
  }
  return tocomm::exp::apply_entries(tocomm::exp::ExperimentConfig{}, entries);
}

void add_common(CLI::App* cmd, Common& c, bool grid_flags) {
  cmd->add_option("--config", c.config, "Config file (dotted key = value)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Seed (replaces experiment.seeds)");
  if (grid_flags) {
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--snr", c.snr, "SNR in dB");
    cmd->add_option("--channel", c.channel, "Channel kind: awgn or rayleigh");
    cmd->add_option("--regime", c.regimes, "Regime(s): sup, sup60, ssl-ft, ssl-ft60")
        ->delimiter(',');
    cmd->add_option("--threads", c.threads, "Worker threads");
  }
}

int cmd_run(const Common& c) {
  const auto cfg = resolve_config(c);
  std::cerr << "# resolved config (hash " << tocomm::exp::config_hash(cfg) << ")\n"
            << tocomm::exp::to_text(cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto result = tocomm::exp::run_experiment(cfg, [](const tocomm::exp::Artifact& a) {
    std::cerr << "wrote " << a.path.string() << " (" << a.rounds << " rounds)\n";
  });
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << result.artifacts.size() << " run logs and " << result.manifest.string()
            << " written in " << fmt(secs) << " s\n";
  return 0;
}

std::vector<tocomm::report::RunLog> load_inputs(const std::vector<std::string>& inputs) {
  std::vector<tocomm::report::RunLog> runs;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      auto more = tocomm::report::load_runs(in);
      runs.insert(runs.end(), more.begin(), more.end());
    } else {
      runs.push_back(tocomm::report::load_run(in));
    }
  }
  if (runs.empty()) throw tocomm::InputError("no run logs found");
  return runs;
}

int cmd_table(const Common& c, const std::vector<std::string>& inputs,
              std::vector<double> thresholds) {
  if (thresholds.empty()) thresholds = resolve_config(c).thresholds;
  const auto runs = load_inputs(inputs);
  const auto table = tocomm::report::render_table(runs, thresholds);
  const std::string text = tocomm::report::to_text(table);
  std::cout << text;
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    tocomm::io::write_file_atomic(fs::path(c.out) / "table.txt", text);
    tocomm::io::write_file_atomic(fs::path(c.out) / "table.csv",
                                  tocomm::report::to_csv(table));
  }
  return 0;
}

int cmd_curves(const Common& c, const std::vector<std::string>& inputs) {
  const auto runs = load_inputs(inputs);
  const fs::path out = c.out.empty() ? fs::path(inputs.front()) / "curves" : fs::path(c.out);
  const auto files = tocomm::report::emit_curves(runs, out);
  std::cout << files.size() << " curve files written to " << out.string() << "\n";
  return 0;
}

int cmd_verify(const Common& c, std::size_t joints, std::size_t pgms, std::size_t theorem,
               double tol) {
  namespace info = tocomm::info;
  const std::uint64_t seed = c.seed.value_or(1);
  std::vector<info::CheckSummary> all = info::sweep_joint_identities(joints, seed, tol);
  const auto pgm = info::sweep_pgm_identities(pgms, seed, tol);
  all.insert(all.end(), pgm.begin(), pgm.end());
  all.push_back(info::sweep_theorem1(theorem, seed, tol));
  bool ok = true;
  for (const auto& s : all) {
    std::printf("%s  %-66s  %zu/%zu  worst slack %.3e\n", s.passed() ? "PASS" : "FAIL",
                s.name.c_str(), s.instances - s.failures, s.instances, s.worst_slack);
    if (!s.passed()) {
      ok = false;
      std::printf("first failing instance:\n%s\n", s.first_failure.c_str());
    }
  }
  return ok ? 0 : 1;
}

int cmd_gen_data(const Common& c) {
  const auto cfg = resolve_config(c);
  const std::uint64_t seed = cfg.seeds.front();
  const fs::path out = c.out.empty() ? fs::path("data") : fs::path(c.out);
  fs::create_directories(out);
  const auto split = tocomm::data::make_blob_split(cfg.data.blobs, cfg.data.test_per_class, seed);
  tocomm::data::save_raw(split.train, out / "train.tocd");
  tocomm::data::save_raw(split.test, out / "test.tocd");
  std::cout << "wrote " << (out / "train.tocd").string() << " (" << split.train.size()
            << " x " << split.train.dim() << ") and " << (out / "test.tocd").string() << " ("
            << split.test.size() << " x " << split.test.dim() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tocomm: task-oriented communication with self-supervised pre-training"};
  app.require_subcommand(1);

  Common run_c, table_c, curves_c, verify_c, gen_c;
  auto* run = app.add_subcommand("run", "Train every regime on every channel and log CSVs");
  add_common(run, run_c, true);

  auto* table = app.add_subcommand("table", "Rounds-to-threshold report from run CSVs");
  add_common(table, table_c, false);
  std::vector<std::string> table_inputs{"results"};
  std::vector<double> thresholds;
  table->add_option("inputs", table_inputs, "Run CSVs or directories");
  table->add_option("--thresholds", thresholds, "Loss thresholds")->delimiter(',');
  table->add_option("--out", table_c.out, "Also write table.txt and table.csv here");

  auto* curves = app.add_subcommand("curves", "Accuracy-versus-round series from run CSVs");
  add_common(curves, curves_c, false);
  std::vector<std::string> curves_inputs{"results"};
  curves->add_option("inputs", curves_inputs, "Run CSVs or directories");
  curves->add_option("--out", curves_c.out, "Output directory");

  auto* verify = app.add_subcommand("verify", "Exact information-theory sweeps");
  add_common(verify, verify_c, false);
  std::size_t joints = 200, pgms = 200, theorem = 100;
  double tol = 1e-9;
  verify->add_option("--joints", joints, "Random joints for the chain rule checks");
  verify->add_option("--pgms", pgms, "Random PGMs for the identity checks");
  verify->add_option("--theorem", theorem, "Random PGMs for the theorem sweep");
  verify->add_option("--tol", tol, "Tolerance in bits");
  verify->add_option("--threads", verify_c.threads, "Unused; sweeps are sequential");

  auto* gen = app.add_subcommand("gen-data", "Write the synthetic dataset as raw tensors");
  add_common(gen, gen_c, false);
  gen->add_option("--out", gen_c.out, "Output directory (default data)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_c);
    if (*table) return cmd_table(table_c, table_inputs, thresholds);
    if (*curves) return cmd_curves(curves_c, curves_inputs);
    if (*verify) return cmd_verify(verify_c, joints, pgms, theorem, tol);
    if (*gen) return cmd_gen_data(gen_c);
  } catch (const tocomm::ConfigError& e) {
    std::cerr << "config error";
    if (!e.key().empty()) std::cerr << " [" << e.key() << "]";
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
