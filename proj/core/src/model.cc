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

#include "tocomm/model.h"

#include <cmath>
#include <string>

#include "tocomm/errors.h"

namespace tocomm::model {

Mlp::Mlp(const std::vector<std::size_t>& dims, Rng& rng) {
  if (dims.size() < 2) throw ConfigError("an MLP needs at least two dims");
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t fan_in = dims[l], fan_out = dims[l + 1];
    if (fan_in == 0 || fan_out == 0) {
      throw ConfigError("layer dimensions must be positive");
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    ad::Tensor w({fan_in, fan_out}, true);
    for (double& v : w.data()) v = uniform(rng, -bound, bound);
    weights_.push_back(std::move(w));
    biases_.emplace_back(ad::Shape{1, fan_out}, true);
  }
}

ad::Var Mlp::forward(ad::Graph& graph, const ad::Var& x) {
  if (x.cols() != input_dim()) {
    throw DimensionError("mlp: input width " + std::to_string(x.cols()) +
                         " != " + std::to_string(input_dim()));
  }
  ad::Var h = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    h = ad::add_row(ad::matmul(h, graph.parameter(weights_[l])),
                    graph.parameter(biases_[l]));
    if (l + 1 < weights_.size()) h = ad::relu(h);
  }
  return h;
}

std::size_t Mlp::input_dim() const {
  return weights_.empty() ? 0 : weights_.front().rows();
}

std::size_t Mlp::output_dim() const {
  return weights_.empty() ? 0 : weights_.back().cols();
}

std::vector<ad::Tensor*> Mlp::parameters() {
  std::vector<ad::Tensor*> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(&weights_[l]);
    out.push_back(&biases_[l]);
  }
  return out;
}

void Mlp::set_requires_grad(bool value) {
  for (ad::Tensor* p : parameters()) p->set_requires_grad(value);
}

void EncoderSpec::validate() const {
  if (input_dim == 0) throw ConfigError("input_dim must be positive", "data.dim");
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw ConfigError("hidden dims must be positive", "model.hidden_dims");
  }
  if (feature_dim < 2 || feature_dim % 2 != 0) {
    throw ConfigError("feature_dim must be even and >= 2", "model.feature_dim");
  }
}

void ReceiverSpec::validate() const {
  if (feature_dim < 2 || feature_dim % 2 != 0) {
    throw ConfigError("feature_dim must be even and >= 2", "model.feature_dim");
  }
  for (std::size_t h : hidden_dims) {
    if (h == 0) {
      throw ConfigError("hidden dims must be positive",
                        "model.receiver_hidden_dims");
    }
  }
  if (num_classes == 0) {
    throw ConfigError("num_classes must be positive", "model.num_classes");
  }
}

namespace {

std::vector<std::size_t> layer_dims(std::size_t in,
                                    const std::vector<std::size_t>& hidden,
                                    std::size_t out) {
  std::vector<std::size_t> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

}  // namespace

Encoder::Encoder(const EncoderSpec& spec, double power, Rng& rng)
    : spec_(spec), power_(power) {
  spec_.validate();
  if (!(power > 0.0)) throw ConfigError("power must be positive", "channel.power");
  mlp_ = Mlp(layer_dims(spec.input_dim, spec.hidden_dims, spec.feature_dim), rng);
}

ad::Var Encoder::encode(ad::Graph& graph, const ad::Var& x) {
  return channel::power_normalize(mlp_.forward(graph, x), power_);
}

Receiver::Receiver(const ReceiverSpec& spec, Rng& rng) : spec_(spec) {
  spec_.validate();
  mlp_ = Mlp(layer_dims(spec.feature_dim, spec.hidden_dims, spec.num_classes), rng);
}

ad::Var Receiver::infer(ad::Graph& graph, const ad::Var& received) {
  return mlp_.forward(graph, received);
}

ad::Var SplitModel::forward(ad::Graph& graph, const ad::Var& x, Rng& rng) {
  if (encoder.spec().feature_dim != receiver.spec().feature_dim) {
    throw DimensionError("encoder and receiver feature widths differ");
  }
  const ad::Var z = encoder.encode(graph, x);
  return receiver.infer(graph, channel::transmit(z, channel, rng));
}

std::vector<std::size_t> predict(const ad::Tensor& logits) {
  std::vector<std::size_t> out(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < logits.cols(); ++j) {
      if (logits(i, j) > logits(i, best)) best = j;
    }
    out[i] = best;
  }
  return out;
}

std::pair<ad::Var, ad::Var> forward_pair(ad::Graph& graph, Encoder& encoder,
                                         const ad::Var& x, const ad::Var& x2,
                                         const channel::ChannelConfig& channel,
                                         Rng& rng) {
  if (x.shape() != x2.shape()) {
    throw DimensionError("forward_pair: the two views differ in shape");
  }
  ad::Var first = channel::transmit(encoder.encode(graph, x), channel, rng);
  ad::Var second = channel::transmit(encoder.encode(graph, x2), channel, rng);
  return {first, second};
}

}  // namespace tocomm::model
