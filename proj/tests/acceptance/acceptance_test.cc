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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "support/op_catalog.h"
#include "support/table_fixture.h"
#include "tocomm/channel.h"
#include "tocomm/data.h"
#include "tocomm/experiment.h"
#include "tocomm/infotheory.h"
#include "tocomm/io.h"
#include "tocomm/loss.h"
#include "tocomm/report.h"
#include "tocomm/trainer.h"

namespace {

using namespace tocomm;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tocomm_accept_" + name);
  fs::remove_all(p);
  return p;
}

Outcome gradients() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string where;
  for (const auto& op : testing::op_catalog()) {
    for (std::uint64_t point = 0; point < 20; ++point) {
      Rng rng = make_rng(point, 900);
      const auto r = testing::check_gradients(op.loss, op.inputs(rng), 1e-5, op.max_coords);
      if (r.max_rel_error > worst) {
        worst = r.max_rel_error;
        where = op.name + " " + r.worst;
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst < 1e-4 && t < 10.0,
          "max rel error " + fmt("%.2e", worst) + " (" + where + "), " + fmt("%.1f s", t)};
}

Outcome channel_statistics() {
  bool ok = true;
  std::ostringstream msg;
  const double expected[] = {1.0, 0.1, 0.01};
  const double snrs[] = {0.0, 10.0, 20.0};
  for (int i = 0; i < 3; ++i) {
    const double s2 = channel::snr_to_sigma(snrs[i], 1.0);
    ok &= std::abs(s2 - expected[i]) <= 1e-15;
    channel::ChannelConfig cfg;
    cfg.snr_db = snrs[i];
    Rng rng = make_rng(5, i);
    // 1e5 complex noise draws: 1000 rows x 100 symbols.
    const auto draw = channel::draw_realization(1000, 100, cfg, rng);
    double acc = 0.0;
    for (std::size_t j = 0; j < draw.n_re.size(); ++j)
      acc += draw.n_re[j] * draw.n_re[j] + draw.n_im[j] * draw.n_im[j];
    const double measured = acc / static_cast<double>(draw.n_re.size());
    const double rel = std::abs(measured - s2) / s2;
    ok &= rel < 0.01;
    msg << snrs[i] << "dB var " << fmt("%.5f", measured) << "; ";
  }
  Rng rng = make_rng(6, 0);
  ad::Tensor z({64, 16});
  for (double& v : z.data()) v = 3.0 * standard_normal(rng);
  ad::Graph g;
  const ad::Tensor n = channel::power_normalize(g.constant(z), 1.0).value();
  double worst = 0.0;
  for (std::size_t r = 0; r < n.rows(); ++r) {
    double p = 0.0;
    for (std::size_t c = 0; c < n.cols(); ++c) p += n(r, c) * n(r, c);
    worst = std::max(worst, std::abs(p / static_cast<double>(n.cols()) - 1.0));
  }
  ok &= worst <= 1e-12;
  msg << "power dev " << fmt("%.1e", worst);
  return {ok, msg.str()};
}

Outcome mi_oracle() {
  using info::DiscreteJoint;
  const double e = 0.11;
  const DiscreteJoint bsc({{"X", 2}, {"Y", 2}},
                          {0.5 * (1 - e), 0.5 * e, 0.5 * e, 0.5 * (1 - e)});
  const double h2 = -e * std::log2(e) - (1 - e) * std::log2(1 - e);
  const double d1 = std::abs(info::mutual_information(bsc, {"X"}, {"Y"}) - (1.0 - h2));
  // Y = X xor X' with X, X' independent uniform bits.
  std::vector<double> t(8, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int xv = 0; xv < 2; ++xv) t[x * 4 + xv * 2 + (x ^ xv)] = 0.25;
  const DiscreteJoint xorj({{"X", 2}, {"X'", 2}, {"Y", 2}}, t);
  const double d2 = std::abs(info::mutual_information(xorj, {"X"}, {"Y"}));
  const double d3 = std::abs(info::conditional_mi(xorj, {"X"}, {"Y"}, {"X'"}) - 1.0);
  const double worst = std::max({d1, d2, d3});
  return {worst <= 1e-9, "max deviation " + fmt("%.1e", worst) + " bits"};
}

Outcome identities() {
  const auto t0 = Clock::now();
  auto all = info::sweep_joint_identities(200, 41);
  const auto pgm = info::sweep_pgm_identities(200, 42);
  all.insert(all.end(), pgm.begin(), pgm.end());
  const double t = seconds_since(t0);
  bool ok = t < 60.0;
  std::ostringstream msg;
  for (const auto& s : all) {
    ok &= s.passed();
    msg << s.name << " " << s.instances - s.failures << "/" << s.instances << "; ";
    if (!s.passed()) std::fprintf(stderr, "%s\n", s.first_failure.c_str());
  }
  msg << fmt("%.1f s", t);
  return {ok, msg.str()};
}

Outcome theorem() {
  const auto s = info::sweep_theorem1(100, 43);
  if (!s.passed()) std::fprintf(stderr, "first violation:\n%s\n", s.first_failure.c_str());
  return {s.passed() && s.instances == 100,
          std::to_string(s.instances - s.failures) + "/" + std::to_string(s.instances) +
              " chains hold, worst slack " + fmt("%.2e", s.worst_slack)};
}

double nce_value(const ad::Tensor& a, const ad::Tensor& b, const loss::InfoNceConfig& cfg) {
  ad::Graph g;
  return loss::info_nce(g.constant(a), g.constant(b), cfg).value().item();
}

// Exact E[loss] over every batch of B i.i.d. pairs (u, v) drawn from
// p(u, v) = (1 - a) [u = v] / m + a / m^2, embedded one-hot. Returns the
// largest value of log(2B - 1) - E[loss] minus I(U;V) in nats.
double bound_excess(std::size_t m, std::size_t batch, double a, const loss::InfoNceConfig& cfg) {
  const double diag = (1 - a) / m + a / (m * m);
  const double off = a / (m * m);
  double mi = 2.0 * std::log(static_cast<double>(m)) + m * diag * std::log(diag);
  if (off > 0) mi += (m * m - m) * off * std::log(off);

  const std::size_t pairs = m * m;
  std::size_t total = 1;
  for (std::size_t i = 0; i < batch; ++i) total *= pairs;
  double expected = 0.0;
  ad::Tensor za({batch, m}), zb({batch, m});
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double p = 1.0;
    std::fill(za.data().begin(), za.data().end(), 0.0);
    std::fill(zb.data().begin(), zb.data().end(), 0.0);
    for (std::size_t i = 0; i < batch; ++i, c /= pairs) {
      const std::size_t u = (c % pairs) / m, v = (c % pairs) % m;
      p *= u == v ? diag : off;
      za(i, u) = 1.0;
      zb(i, v) = 1.0;
    }
    if (p > 0) expected += p * nce_value(za, zb, cfg);
  }
  return std::log(2.0 * batch - 1.0) - expected - mi;
}

Outcome infonce() {
  bool ok = true;
  std::ostringstream msg;
  const loss::InfoNceConfig cfg;
  Rng rng = make_rng(61, 0);
  double min_loss = 1e300, inv = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    ad::Tensor a({6, 5}), b({6, 5});
    for (double& v : a.data()) v = standard_normal(rng);
    for (double& v : b.data()) v = standard_normal(rng);
    const double l = nce_value(a, b, cfg);
    min_loss = std::min(min_loss, l);
    ad::Tensor a2 = a, b2 = b;
    for (double& v : a2.data()) v *= 3.7;
    for (double& v : b2.data()) v *= 0.2;
    inv = std::max(inv, std::abs(nce_value(a2, b2, cfg) - l));
    inv = std::max(inv, std::abs(nce_value(b, a, cfg) - l));
  }
  ad::Tensor same = ad::Tensor::full({6, 5}, 0.3);
  const double ident = std::abs(nce_value(same, same, cfg) - std::log(11.0));
  ok &= min_loss >= 0.0 && inv <= 1e-9 && ident <= 1e-12;
  msg << "min loss " << fmt("%.3f", min_loss) << ", invariance " << fmt("%.1e", inv)
      << ", identical " << fmt("%.1e", ident);

  double excess = -1e300;
  for (double tau : {0.1, 1.0})
    for (std::size_t m : {2, 3})
      for (std::size_t b : {2, 3})
        for (double a : {0.0, 0.3, 0.7}) {
          loss::InfoNceConfig c;
          c.temperature = tau;
          excess = std::max(excess, bound_excess(m, b, a, c));
        }
  ok &= excess <= 1e-6;
  msg << ", bound excess " << fmt("%.3f", excess) << " nats";
  return {ok, msg.str()};
}

Outcome convergence() {
  const fs::path out = scratch("grid");
  const auto t0 = Clock::now();
  exp::ExperimentConfig cfg = exp::parse_config(
      "experiment.seeds = 1, 2, 3\n"
      "experiment.channels = awgn:10, rayleigh:10\n"
      "experiment.output_dir = " + out.string() + "\n");
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  exp::run_experiment(cfg);
  const double t = seconds_since(t0);

  // rounds[(channel, seed)][regime] = rounds per threshold
  std::map<std::string, std::map<std::string, std::vector<std::optional<std::size_t>>>> rounds;
  for (const auto& run : report::load_runs(out))
    rounds[std::string(channel::to_string(run.kind)) + " s" + std::to_string(run.seed)]
          [run.regime] = train::rounds_to_threshold(run.records, cfg.thresholds);

  bool ok = t < 600.0 && rounds.size() == 6;
  std::size_t compared = 0, majority_hits = 0, majority_total = 0;
  std::ostringstream msg;
  for (auto& [key, r] : rounds) {
    if (r.size() != 4) {
      ok = false;
      continue;
    }
    for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
      const auto& sup = r["Sup"][k];
      const auto& sup60 = r["Sup(60%)"][k];
      const auto& ssl = r["SSL-FT"][k];
      const auto& ssl60 = r["SSL-FT(60%)"][k];
      if (!(sup && sup60 && ssl && ssl60)) continue;
      ++compared;
      if (!(*ssl < *sup && *ssl60 < *sup60)) {
        ok = false;
        msg << "order broken at " << key << " L=" << cfg.thresholds[k] << "; ";
      }
      ++majority_total;
      majority_hits += *ssl60 <= *sup;
    }
  }
  ok &= compared > 0 && 2 * majority_hits > majority_total;
  msg << compared << " comparisons, SSL-FT(60%) <= Sup at " << majority_hits << "/"
      << majority_total << ", " << fmt("%.0f s", t);
  fs::remove_all(out);
  return {ok, msg.str()};
}

Outcome table_fixture() {
  std::string diff;
  for (const auto& pub : {testing::reference_awgn(), testing::reference_rayleigh()})
    diff += testing::compare_marks(testing::build_reference(pub), pub);
  return {diff.empty(), diff.empty() ? "AWGN and Rayleigh markings reproduced" : diff};
}

Outcome determinism() {
#ifndef TOCOMM_CLI_PATH
  return {false, "command-line tool not built"};
#else
  const fs::path dir = scratch("determinism");
  fs::create_directories(dir);
  io::write_file_atomic(dir / "small.cfg",
                        "train.pretrain_epochs = 2\n"
                        "train.finetune_epochs = 3\n"
                        "data.per_class = 30\n"
                        "data.classes = 5\n"
                        "experiment.channels = awgn:10, rayleigh:0\n");
  std::string first;
  bool ok = true;
  std::size_t files = 0;
  for (const char* name : {"a", "b"}) {
    const std::string cmd = std::string("\"") + TOCOMM_CLI_PATH + "\" run --config \"" +
                            (dir / "small.cfg").string() + "\" --seed 9 --out \"" +
                            (dir / name).string() + "\" > /dev/null 2>&1";
    ok &= std::system(cmd.c_str()) == 0;
  }
  if (ok) {
    for (const auto& e : fs::directory_iterator(dir / "a")) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      const fs::path other = dir / "b" / e.path().filename();
      ok &= fs::exists(other) && io::read_text(e.path()) == io::read_text(other);
    }
  }
  ok &= files == 8;
  fs::remove_all(dir);
  return {ok, std::to_string(files) + " CSVs compared byte for byte"};
#endif
}

Outcome label_blindness() {
  const exp::ExperimentConfig ec = exp::parse_config(
      "data.per_class = 40\ntrain.pretrain_epochs = 3\ntrain.finetune_epochs = 1\n");
  train::TrainConfig cfg = ec.train;
  cfg.seed = 4;
  const auto split = data::make_blob_split(ec.data.blobs, ec.data.test_per_class, 4);

  train::PretrainCache cache;
  train::run_regime(train::standard_regimes()[0], split.train, split.test, cfg, &cache);

  data::Dataset stripped = split.train;
  stripped.labels.clear();
  stripped.num_classes = 0;
  model::Encoder enc = train::init_encoder(cfg);
  const auto records = train::pretrain(enc, stripped.features, cfg);

  const bool ok = cache.encoder && *cache.encoder == enc && records == cache.records;
  return {ok, ok ? "pre-trained encoder bitwise identical without labels"
                 : "encoder differs after label deletion"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gradient correctness", gradients},
      {"channel statistics", channel_statistics},
      {"exact MI oracle", mi_oracle},
      {"information identities", identities},
      {"theorem chain sweep", theorem},
      {"InfoNCE properties", infonce},
      {"convergence ordering", convergence},
      {"table fixture", table_fixture},
      {"determinism", determinism},
      {"label blindness", label_blindness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
