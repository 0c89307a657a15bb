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

#include "tocomm/loss.h"

#include <cmath>
#include <string>
#include <vector>

#include "tocomm/errors.h"

namespace tocomm::loss {

void InfoNceConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature must be positive", "loss.temperature");
  }
}

ad::Var cosine_similarity_matrix(const ad::Var& a, const ad::Var& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("cosine_similarity_matrix: widths " +
                         std::to_string(a.cols()) + " and " +
                         std::to_string(b.cols()) + " differ");
  }
  const ad::Var ua = ad::row_normalize(a, 1.0);
  const ad::Var ub = ad::row_normalize(b, 1.0);
  return ad::matmul(ua, ad::transpose(ub));
}

ad::Var info_nce(const ad::Var& z, const ad::Var& z2, const InfoNceConfig& cfg) {
  cfg.validate();
  if (z.shape() != z2.shape()) {
    throw DimensionError("info_nce: the two views differ in shape");
  }
  const std::size_t batch = z.rows();
  if (batch < 2) {
    throw ConfigError("info_nce needs a batch of at least 2 (no negatives)",
                      "train.batch_size");
  }
  const ad::Var stacked = ad::concat_rows(z, z2);
  const ad::Var unit = ad::row_normalize(stacked, 1.0);
  const ad::Var logits =
      ad::scale(ad::matmul(unit, ad::transpose(unit)), 1.0 / cfg.temperature);
  const ad::Var log_prob = ad::log_softmax(logits, cfg.exclude_self);
  std::vector<std::size_t> positive(2 * batch);
  for (std::size_t i = 0; i < batch; ++i) {
    positive[i] = i + batch;
    positive[i + batch] = i;
  }
  return ad::neg(ad::mean(ad::select_per_row(log_prob, positive)));
}

ad::Var cross_entropy(const ad::Var& logits, std::span<const std::size_t> labels) {
  const std::size_t classes = logits.cols();
  if (labels.size() != logits.rows()) {
    throw DimensionError("cross_entropy: " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(logits.rows()) +
                         " rows");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= classes) {
      throw InputError("cross_entropy: label " + std::to_string(labels[i]) +
                       " at row " + std::to_string(i) + " outside [0, " +
                       std::to_string(classes) + ")");
    }
  }
  return ad::neg(ad::mean(ad::select_per_row(ad::log_softmax(logits), labels)));
}

}  // namespace tocomm::loss
