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

#ifndef TOCOMM_TESTS_SUPPORT_OP_CATALOG_H_
#define TOCOMM_TESTS_SUPPORT_OP_CATALOG_H_

// Every differentiable operation as a scalar loss over random inputs, for
// the finite-difference oracle.

#include <string>
#include <vector>

#include "gradcheck.h"
#include "tocomm/channel.h"
#include "tocomm/loss.h"
#include "tocomm/model.h"

namespace tocomm::testing {

struct OpCase {
  std::string name;
  // Fresh random inputs for one probe point.
  std::function<std::vector<ad::Tensor>(Rng&)> inputs;
  LossFn loss;
  // Probe at most this many coordinates per tensor (0 = all).
  std::size_t max_coords = 0;
};

// sum(out * W) with a fixed pseudo-random W, so every output entry carries a
// distinct upstream gradient.
inline ad::Var project(const ad::Var& out) {
  Rng rng = make_rng(2024, out.value().size());
  ad::Tensor w(out.shape());
  for (double& v : w.data()) v = standard_normal(rng);
  return ad::sum(ad::mul(out, out.graph().constant(std::move(w))));
}

inline channel::Realization fixed_draw(std::size_t batch, std::size_t symbols,
                                       const channel::ChannelConfig& cfg) {
  Rng rng = make_rng(77, batch * 1000 + symbols);
  return channel::draw_realization(batch, symbols, cfg, rng);
}

inline std::vector<OpCase> op_catalog() {
  using ad::Tensor;
  using ad::Var;
  std::vector<OpCase> cases;
  auto two = [](ad::Shape a, ad::Shape b) {
    return [a, b](Rng& rng) {
      return std::vector<Tensor>{random_tensor(a, rng), random_tensor(b, rng)};
    };
  };
  auto one = [](ad::Shape a, double gap = 0.0) {
    return [a, gap](Rng& rng) { return std::vector<Tensor>{random_tensor(a, rng, gap)}; };
  };

  cases.push_back({"matmul", two({3, 4}, {4, 5}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::matmul(v[0], v[1])); }});
  cases.push_back({"transpose", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::transpose(v[0])); }});
  cases.push_back({"add", two({3, 4}, {3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(v[0] + v[1]); }});
  cases.push_back({"add_scalar_broadcast", two({3, 4}, {1, 1}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(v[0] + v[1]); }});
  cases.push_back({"sub", two({3, 4}, {3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(v[0] - v[1]); }});
  cases.push_back({"mul", two({3, 4}, {3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(v[0] * v[1]); }});
  cases.push_back({"mul_scalar_broadcast", two({1, 1}, {3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(v[0] * v[1]); }});
  cases.push_back({"scale", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::scale(v[0], -1.7)); }});
  cases.push_back({"add_scalar", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::add_scalar(v[0], 0.3)); }});
  cases.push_back({"neg", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::neg(v[0])); }});
  cases.push_back({"relu", one({3, 4}, 0.05),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::relu(v[0])); }});
  cases.push_back({"exp", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::exp(v[0])); }});
  cases.push_back({"log",
                   [](Rng& rng) { return std::vector<Tensor>{random_positive({3, 4}, rng)}; },
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::log(v[0])); }});
  cases.push_back({"sum", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return ad::scale(ad::sum(v[0]), 0.7); }});
  cases.push_back({"mean", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::mean(v[0])); }});
  cases.push_back({"add_row", two({3, 4}, {1, 4}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::add_row(v[0], v[1])); }});
  cases.push_back({"log_softmax", one({4, 5}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::log_softmax(v[0])); }});
  cases.push_back({"log_softmax_exclude_diagonal", one({4, 4}),
                   [](ad::Graph&, std::vector<Var>& v) {
                     return project(ad::log_softmax(v[0], true));
                   }});
  cases.push_back({"row_normalize", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) {
                     return project(ad::row_normalize(v[0], 2.5));
                   }});
  cases.push_back({"concat_rows", two({2, 3}, {4, 3}),
                   [](ad::Graph&, std::vector<Var>& v) { return project(ad::concat_rows(v[0], v[1])); }});
  cases.push_back({"select_per_row", one({3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) {
                     const std::size_t cols[] = {2, 0, 3};
                     return project(ad::select_per_row(v[0], cols));
                   }});
  cases.push_back({"power_normalize", one({3, 6}),
                   [](ad::Graph&, std::vector<Var>& v) {
                     return project(channel::power_normalize(v[0], 1.0));
                   }});
  for (auto kind : {channel::Kind::kAwgn, channel::Kind::kRayleigh}) {
    for (bool eq : {true, false}) {
      if (kind == channel::Kind::kAwgn && !eq) continue;
      channel::ChannelConfig cfg;
      cfg.kind = kind;
      cfg.equalize = eq;
      cfg.snr_db = 5.0;
      cases.push_back({std::string("channel_") + std::string(channel::to_string(kind)) +
                           (eq ? "_equalized" : "_raw"),
                       one({3, 6}),
                       [cfg](ad::Graph&, std::vector<Var>& v) {
                         return project(channel::apply(v[0], fixed_draw(3, 3, cfg), cfg));
                       }});
    }
  }
  cases.push_back({"cosine_similarity_matrix", two({3, 4}, {3, 4}),
                   [](ad::Graph&, std::vector<Var>& v) {
                     return project(loss::cosine_similarity_matrix(v[0], v[1]));
                   }});
  for (bool exclude : {true, false}) {
    loss::InfoNceConfig cfg;
    cfg.exclude_self = exclude;
    cfg.temperature = 0.5;
    cases.push_back({exclude ? "info_nce" : "info_nce_with_self", two({4, 6}, {4, 6}),
                     [cfg](ad::Graph&, std::vector<Var>& v) {
                       return loss::info_nce(v[0], v[1], cfg);
                     }});
  }
  cases.push_back({"cross_entropy", one({4, 5}),
                   [](ad::Graph&, std::vector<Var>& v) {
                     const std::size_t labels[] = {1, 4, 0, 1};
                     return loss::cross_entropy(v[0], labels);
                   }});

  // Full device -> channel -> server composite: encoder and receiver
  // parameters are the probed tensors, input and labels are fixed.
  for (auto kind : {channel::Kind::kAwgn, channel::Kind::kRayleigh}) {
    channel::ChannelConfig cfg;
    cfg.kind = kind;
    cfg.snr_db = 10.0;
    cases.push_back(
        {std::string("composite_") + std::string(channel::to_string(kind)),
         [](Rng& rng) {
           // W1 [6x8], b1 [1x8], W2 [8x4], b2, V1 [4x8], c1, V2 [8x3], c2
           std::vector<Tensor> p;
           for (auto shape : std::vector<ad::Shape>{
                    {6, 8}, {1, 8}, {8, 4}, {1, 4}, {4, 8}, {1, 8}, {8, 3}, {1, 3}}) {
             Tensor t = random_tensor(shape, rng);
             for (double& x : t.data()) x *= 0.6;
             p.push_back(std::move(t));
           }
           return p;
         },
         [cfg](ad::Graph& g, std::vector<Var>& v) {
           Rng rng = make_rng(5, 0);
           Var x = g.constant(random_tensor({5, 6}, rng));
           Var h = ad::relu(ad::add_row(ad::matmul(x, v[0]), v[1]));
           Var z = channel::power_normalize(ad::add_row(ad::matmul(h, v[2]), v[3]), 1.0);
           Var zh = channel::apply(z, fixed_draw(5, 2, cfg), cfg);
           Var r = ad::relu(ad::add_row(ad::matmul(zh, v[4]), v[5]));
           Var logits = ad::add_row(ad::matmul(r, v[6]), v[7]);
           const std::size_t labels[] = {0, 2, 1, 1, 0};
           return loss::cross_entropy(logits, labels);
         },
         0});
  }
  return cases;
}

}  // namespace tocomm::testing

#endif  // TOCOMM_TESTS_SUPPORT_OP_CATALOG_H_
