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

#ifndef TOCOMM_MODEL_H_
#define TOCOMM_MODEL_H_

// Split network: an on-device encoder (transmitter) and a server-side
// receiver, with the wireless channel between them.

#include <cstddef>
#include <utility>
#include <vector>

#include "tocomm/autodiff.h"
#include "tocomm/channel.h"
#include "tocomm/random.h"

namespace tocomm::model {

// Fully connected ReLU network. Hidden layers use ReLU; the output layer is
// linear.
class Mlp {
 public:
  Mlp() = default;
  // Weights ~ U(-sqrt(6 / fan_in), sqrt(6 / fan_in)), biases zero.
  Mlp(const std::vector<std::size_t>& dims, Rng& rng);

  ad::Var forward(ad::Graph& graph, const ad::Var& x);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t num_layers() const { return weights_.size(); }

  ad::Tensor& weight(std::size_t layer) { return weights_[layer]; }
  ad::Tensor& bias(std::size_t layer) { return biases_[layer]; }
  const ad::Tensor& weight(std::size_t layer) const { return weights_[layer]; }
  const ad::Tensor& bias(std::size_t layer) const { return biases_[layer]; }

  // Pointers into this object; invalidated if the Mlp is moved.
  std::vector<ad::Tensor*> parameters();
  void set_requires_grad(bool value);
  bool operator==(const Mlp& other) const {
    return weights_ == other.weights_ && biases_ == other.biases_;
  }

 private:
  std::vector<ad::Tensor> weights_;  // [in x out]
  std::vector<ad::Tensor> biases_;   // [1 x out]
};

struct EncoderSpec {
  std::size_t input_dim = 64;
  std::vector<std::size_t> hidden_dims = {256, 128};
  std::size_t feature_dim = 32;

  void validate() const;
};

struct ReceiverSpec {
  std::size_t feature_dim = 32;
  std::vector<std::size_t> hidden_dims = {256};
  std::size_t num_classes = 20;

  void validate() const;
};

// Transmitter f_theta: MLP followed by power normalization.
class Encoder {
 public:
  Encoder() = default;
  Encoder(const EncoderSpec& spec, double power, Rng& rng);

  // [batch x input_dim] -> power-normalized [batch x k].
  ad::Var encode(ad::Graph& graph, const ad::Var& x);

  const EncoderSpec& spec() const { return spec_; }
  double power() const { return power_; }
  Mlp& network() { return mlp_; }
  const Mlp& network() const { return mlp_; }
  std::vector<ad::Tensor*> parameters() { return mlp_.parameters(); }
  bool operator==(const Encoder& other) const { return mlp_ == other.mlp_; }

 private:
  EncoderSpec spec_;
  double power_ = 1.0;
  Mlp mlp_;
};

// Receiver / inferencer g_phi: received features -> class logits.
class Receiver {
 public:
  Receiver() = default;
  Receiver(const ReceiverSpec& spec, Rng& rng);

  ad::Var infer(ad::Graph& graph, const ad::Var& received);

  const ReceiverSpec& spec() const { return spec_; }
  Mlp& network() { return mlp_; }
  const Mlp& network() const { return mlp_; }
  std::vector<ad::Tensor*> parameters() { return mlp_.parameters(); }

 private:
  ReceiverSpec spec_;
  Mlp mlp_;
};

struct SplitModel {
  Encoder encoder;
  Receiver receiver;
  channel::ChannelConfig channel;

  // encode -> transmit -> infer.
  ad::Var forward(ad::Graph& graph, const ad::Var& x, Rng& rng);
};

// Row-wise argmax of a logits matrix; ties resolve to the lowest index.
std::vector<std::size_t> predict(const ad::Tensor& logits);

// Siamese forward of two views through one encoder, each view seeing an
// independent channel draw taken from `rng` in order (x first, then x2).
std::pair<ad::Var, ad::Var> forward_pair(ad::Graph& graph, Encoder& encoder,
                                         const ad::Var& x, const ad::Var& x2,
                                         const channel::ChannelConfig& channel,
                                         Rng& rng);

}  // namespace tocomm::model

#endif  // TOCOMM_MODEL_H_
