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

#ifndef TOCOMM_TRAINER_H_
#define TOCOMM_TRAINER_H_

// Two-stage remote training.
//
// Stage I (pretrain) runs entirely on the device: the encoder is trained with
// the contrastive loss on two augmented views passed through a locally
// simulated channel. It never sees labels and costs no communication rounds.
//
// Stage II (finetune) trains encoder and receiver jointly across the link.
// Each labeled mini-batch is one communication round: features go up the
// channel, the server back-propagates through the receiver and the channel
// and returns d(loss)/dz to the device.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tocomm/autodiff.h"
#include "tocomm/channel.h"
#include "tocomm/data.h"
#include "tocomm/loss.h"
#include "tocomm/model.h"

namespace tocomm::train {

enum class Stage { kPretrain, kFinetune };
std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);

struct Regime {
  std::string name;
  bool pretrain = false;
  double label_fraction = 1.0;

  void validate() const;
  bool operator==(const Regime&) const = default;
};

// The four compared methods: Sup, Sup(60%), SSL-FT, SSL-FT(60%).
std::vector<Regime> standard_regimes();
// Accepts the display names above or the short forms sup, sup60, ssl-ft,
// ssl-ft60 (case-insensitive). Throws ConfigError.
Regime parse_regime(std::string_view text);
// File-name friendly id: sup, sup60, sslft, sslft60.
std::string regime_slug(const Regime& regime);

struct RoundRecord {
  // Communication rounds spent so far. Pre-training records carry the
  // counter unchanged.
  std::size_t round = 0;
  Stage stage = Stage::kFinetune;
  std::size_t epoch = 0;
  double train_loss = 0.0;
  // Set on the last round of each fine-tuning epoch.
  std::optional<double> test_accuracy;

  bool operator==(const RoundRecord&) const = default;
};

struct TrainConfig {
  std::size_t pretrain_epochs = 30;
  std::size_t finetune_epochs = 100;
  std::size_t batch_size = 128;
  // Fine-tuning stops after this many rounds; 0 means no cap.
  std::size_t max_rounds = 0;
  ad::SgdConfig sgd;
  loss::InfoNceConfig infonce;
  channel::ChannelConfig channel;
  data::AugmentConfig augment;
  model::EncoderSpec encoder;
  model::ReceiverSpec receiver;
  std::uint64_t seed = 1;

  void validate() const;
};

// Bookkeeping for the split link: one round per fine-tuning mini-batch.
struct LinkStats {
  std::size_t rounds = 0;
  std::size_t uplink_values = 0;    // feature entries sent device -> server
  std::size_t downlink_values = 0;  // gradient entries sent server -> device
};

// Fresh encoder / receiver for a config; initialization depends only on
// cfg.seed.
model::Encoder init_encoder(const TrainConfig& cfg);
model::Receiver init_receiver(const TrainConfig& cfg);

// Stage I. Takes the feature matrix only, so labels are unreachable. Emits
// one record per epoch (mean contrastive loss, round = `round_counter`).
std::vector<RoundRecord> pretrain(model::Encoder& encoder,
                                  const ad::Tensor& features,
                                  const TrainConfig& cfg,
                                  std::size_t round_counter = 0);

// Result of one split round.
struct RoundOutcome {
  double loss = 0.0;
  // d(loss)/dz computed at the server and the copy applied at the device.
  std::vector<double> server_feature_grad;
  std::vector<double> device_feature_grad;
};

// One fine-tuning round on a labeled mini-batch: device forward, channel,
// server forward/backward, gradient return, device backward, SGD on both
// sides. `channel_rng` supplies the channel draw.
RoundOutcome split_round(model::SplitModel& model, const ad::Tensor& x,
                         std::span<const std::size_t> labels, ad::Sgd& device_opt,
                         ad::Sgd& server_opt, Rng& channel_rng, LinkStats& link);

// Accuracy of argmax predictions over `test`, through the configured channel.
double evaluate(model::SplitModel& model, const data::Dataset& test, Rng& rng);

// Stage II on the labeled samples in `train`. Appends one record per round.
// Throws ConfigError when `train` is empty.
std::vector<RoundRecord> finetune(model::SplitModel& model,
                                  const data::Dataset& train,
                                  const data::Dataset& test,
                                  const TrainConfig& cfg, LinkStats& link);

struct RunResult {
  Regime regime;
  std::vector<RoundRecord> records;
  LinkStats link;
};

// Encoder state after stage I, reusable by every pre-trained regime that
// shares the same config and training features.
struct PretrainCache {
  std::optional<model::Encoder> encoder;
  std::vector<RoundRecord> records;
};

// Label subsampling, optional stage I, stage II. Deterministic in cfg.seed.
RunResult run_regime(const Regime& regime, const data::Dataset& train,
                     const data::Dataset& test, const TrainConfig& cfg,
                     PretrainCache* cache = nullptr);

// For each threshold L, the first fine-tuning round with train_loss <= L.
std::vector<std::optional<std::size_t>> rounds_to_threshold(
    std::span<const RoundRecord> records, std::span<const double> thresholds);

}  // namespace tocomm::train

#endif  // TOCOMM_TRAINER_H_
