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

#include "tocomm/trainer.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "tocomm/errors.h"

namespace tocomm::train {
namespace {

// Stream ids for derive_seed(); every stochastic step has its own stream so
// that changing one stage never perturbs another.
enum Stream : std::uint64_t {
  kEncoderInit = 11,
  kReceiverInit = 12,
  kPretrainShuffle = 13,
  kPretrainNoise = 14,
  kFinetuneShuffle = 15,
  kFinetuneNoise = 16,
  kEvalNoise = 17,
  kLabelMask = 18,
};

constexpr std::size_t kEvalChunk = 512;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(Stage stage) {
  return stage == Stage::kPretrain ? "pretrain" : "finetune";
}

Stage parse_stage(std::string_view text) {
  if (text == "pretrain") return Stage::kPretrain;
  if (text == "finetune") return Stage::kFinetune;
  throw InputError("unknown stage '" + std::string(text) + "'");
}

void Regime::validate() const {
  if (!(label_fraction > 0.0 && label_fraction <= 1.0)) {
    throw ConfigError("regime label fraction must lie in (0, 1]", "regimes");
  }
}

std::vector<Regime> standard_regimes() {
  return {{"SSL-FT", true, 1.0},
          {"Sup", false, 1.0},
          {"SSL-FT(60%)", true, 0.6},
          {"Sup(60%)", false, 0.6}};
}

Regime parse_regime(std::string_view text) {
  const std::string key = lower(text);
  for (const Regime& r : standard_regimes()) {
    if (key == lower(r.name) || key == regime_slug(r)) return r;
  }
  if (key == "ssl-ft60") return standard_regimes()[2];
  if (key == "sup-60" || key == "sup60%") return standard_regimes()[3];
  throw ConfigError("unknown regime '" + std::string(text) +
                        "' (expected Sup, Sup(60%), SSL-FT or SSL-FT(60%))",
                    "regimes");
}

std::string regime_slug(const Regime& regime) {
  std::string slug = regime.pretrain ? "sslft" : "sup";
  if (regime.label_fraction < 1.0) {
    slug += std::to_string(
        static_cast<int>(std::lround(regime.label_fraction * 100.0)));
  }
  return slug;
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("batch size must be >= 1", "train.batch_size");
  if (pretrain_epochs > 0 && batch_size < 2) {
    throw ConfigError("pre-training needs batch size >= 2 for negatives",
                      "train.batch_size");
  }
  sgd.validate();
  infonce.validate();
  channel.validate();
  augment.validate();
  encoder.validate();
  receiver.validate();
  if (encoder.feature_dim != receiver.feature_dim) {
    throw ConfigError("encoder and receiver feature widths differ",
                      "model.feature_dim");
  }
}

model::Encoder init_encoder(const TrainConfig& cfg) {
  Rng rng = make_rng(cfg.seed, kEncoderInit);
  return model::Encoder(cfg.encoder, cfg.channel.power, rng);
}

model::Receiver init_receiver(const TrainConfig& cfg) {
  Rng rng = make_rng(cfg.seed, kReceiverInit);
  return model::Receiver(cfg.receiver, rng);
}

std::vector<RoundRecord> pretrain(model::Encoder& encoder,
                                  const ad::Tensor& features,
                                  const TrainConfig& cfg,
                                  std::size_t round_counter) {
  cfg.validate();
  if (features.cols() != encoder.spec().input_dim) {
    throw DimensionError("pretrain: feature width does not match the encoder");
  }
  std::vector<RoundRecord> records;
  if (cfg.pretrain_epochs == 0) return records;

  data::BatchSampler sampler(features.rows(), cfg.batch_size,
                             derive_seed(cfg.seed, kPretrainShuffle));
  Rng rng = make_rng(cfg.seed, kPretrainNoise);
  ad::Sgd opt(cfg.sgd);
  encoder.network().set_requires_grad(true);
  const auto params = encoder.parameters();
  ad::Graph graph;

  for (std::size_t epoch = 1; epoch <= cfg.pretrain_epochs; ++epoch) {
    double loss_total = 0.0;
    std::size_t steps = 0;
    for (const auto& batch : sampler.next_epoch()) {
      // A trailing batch of one sample has no negatives.
      if (batch.size() < 2) continue;
      const ad::Tensor x = data::gather_rows(features, batch);
      const ad::Tensor x2 = data::augment(x, cfg.augment, rng);
      const auto [z, z2] =
          model::forward_pair(graph, encoder, graph.constant(x),
                              graph.constant(x2), cfg.channel, rng);
      const ad::Var loss = loss::info_nce(z, z2, cfg.infonce);
      loss_total += loss.value().item();
      graph.backward(loss);
      opt.step(params);
      ++steps;
    }
    records.push_back(RoundRecord{round_counter, Stage::kPretrain, epoch,
                                  steps ? loss_total / static_cast<double>(steps)
                                        : 0.0,
                                  std::nullopt});
  }
  return records;
}

RoundOutcome split_round(model::SplitModel& model, const ad::Tensor& x,
                         std::span<const std::size_t> labels,
                         ad::Sgd& device_opt, ad::Sgd& server_opt,
                         Rng& channel_rng, LinkStats& link) {
  RoundOutcome out;

  // Device: encode and transmit.
  ad::Graph device;
  const ad::Var z = model.encoder.encode(device, device.constant(x));

  // Server: the received symbols depend on z through the channel; the
  // server knows the realization and differentiates through it.
  ad::Tensor z_sent = z.value();
  z_sent.set_requires_grad(true);
  link.uplink_values += z_sent.size();
  {
    ad::Graph server;
    const ad::Var z_at_server = server.parameter(z_sent);
    const channel::Realization draw = channel::draw_realization(
        z_sent.rows(), z_sent.cols() / 2, model.channel, channel_rng);
    const ad::Var received = channel::apply(z_at_server, draw, model.channel);
    const ad::Var logits = model.receiver.infer(server, received);
    const ad::Var loss = loss::cross_entropy(logits, labels);
    out.loss = loss.value().item();
    server.backward(loss);
  }
  const auto server_params = model.receiver.parameters();
  server_opt.step(server_params);
  out.server_feature_grad.assign(z_sent.grad().begin(), z_sent.grad().end());

  // Gradient return: lossless.
  out.device_feature_grad = out.server_feature_grad;
  link.downlink_values += out.device_feature_grad.size();

  device.backward_from(z, out.device_feature_grad);
  const auto device_params = model.encoder.parameters();
  device_opt.step(device_params);
  ++link.rounds;
  return out;
}

double evaluate(model::SplitModel& model, const data::Dataset& test, Rng& rng) {
  test.validate();
  std::size_t correct = 0;
  ad::Graph graph;
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < test.size(); start += kEvalChunk) {
    const std::size_t end = std::min(test.size(), start + kEvalChunk);
    idx.resize(end - start);
    for (std::size_t i = start; i < end; ++i) idx[i - start] = i;
    const ad::Var logits =
        model.forward(graph, graph.constant(data::gather_rows(test.features, idx)), rng);
    const auto pred = model::predict(logits.value());
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == test.labels[start + i]) ++correct;
    }
    graph.clear();
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<RoundRecord> finetune(model::SplitModel& model,
                                  const data::Dataset& train,
                                  const data::Dataset& test,
                                  const TrainConfig& cfg, LinkStats& link) {
  cfg.validate();
  if (train.size() == 0) throw ConfigError("no labeled samples to fine-tune on");
  train.validate();
  if (train.dim() != model.encoder.spec().input_dim) {
    throw DimensionError("finetune: feature width does not match the encoder");
  }
  if (train.num_classes != model.receiver.spec().num_classes) {
    throw DimensionError("finetune: class count does not match the receiver");
  }

  data::BatchSampler sampler(train.size(), cfg.batch_size,
                             derive_seed(cfg.seed, kFinetuneShuffle));
  Rng channel_rng = make_rng(cfg.seed, kFinetuneNoise);
  Rng eval_rng = make_rng(cfg.seed, kEvalNoise);
  ad::Sgd device_opt(cfg.sgd);
  ad::Sgd server_opt(cfg.sgd);
  model.encoder.network().set_requires_grad(true);
  model.receiver.network().set_requires_grad(true);

  std::vector<RoundRecord> records;
  const std::size_t first_round = link.rounds;
  bool capped = false;
  for (std::size_t epoch = 1; epoch <= cfg.finetune_epochs && !capped; ++epoch) {
    for (const auto& batch : sampler.next_epoch()) {
      const ad::Tensor x = data::gather_rows(train.features, batch);
      const auto labels = data::gather_labels(train, batch);
      const RoundOutcome r =
          split_round(model, x, labels, device_opt, server_opt, channel_rng, link);
      records.push_back(
          RoundRecord{link.rounds, Stage::kFinetune, epoch, r.loss, std::nullopt});
      if (cfg.max_rounds > 0 && link.rounds - first_round >= cfg.max_rounds) {
        capped = true;
        break;
      }
    }
    records.back().test_accuracy = evaluate(model, test, eval_rng);
  }
  return records;
}

RunResult run_regime(const Regime& regime, const data::Dataset& train,
                     const data::Dataset& test, const TrainConfig& cfg,
                     PretrainCache* cache) {
  regime.validate();
  cfg.validate();
  train.validate();
  if (train.dim() != cfg.encoder.input_dim) {
    throw ConfigError("encoder input_dim does not match the data dimension",
                      "data.dim");
  }

  RunResult result{regime, {}, {}};
  const data::LabelMask mask = data::subsample_labels(
      train, regime.label_fraction, derive_seed(cfg.seed, kLabelMask));
  const data::Dataset labeled = data::labeled_subset(train, mask);

  model::Encoder encoder = init_encoder(cfg);
  if (regime.pretrain) {
    if (cache != nullptr && cache->encoder) {
      encoder = *cache->encoder;
      result.records = cache->records;
    } else {
      result.records = pretrain(encoder, train.features, cfg, result.link.rounds);
      if (cache != nullptr) {
        cache->encoder = encoder;
        cache->records = result.records;
      }
    }
  }

  model::SplitModel model{std::move(encoder), init_receiver(cfg), cfg.channel};
  auto tuned = finetune(model, labeled, test, cfg, result.link);
  result.records.insert(result.records.end(), tuned.begin(), tuned.end());
  return result;
}

std::vector<std::optional<std::size_t>> rounds_to_threshold(
    std::span<const RoundRecord> records, std::span<const double> thresholds) {
  std::vector<std::optional<std::size_t>> out(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    for (const RoundRecord& r : records) {
      if (r.stage != Stage::kFinetune) continue;
      if (r.train_loss <= thresholds[t]) {
        out[t] = r.round;
        break;
      }
    }
  }
  return out;
}

}  // namespace tocomm::train
