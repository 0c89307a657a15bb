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

#ifndef TOCOMM_LOSS_H_
#define TOCOMM_LOSS_H_

#include <cstddef>
#include <span>

#include "tocomm/autodiff.h"

namespace tocomm::loss {

struct InfoNceConfig {
  double temperature = 0.1;
  // Leave each anchor out of its own softmax denominator (NT-Xent). When
  // false the denominator runs over all 2B embeddings, self included.
  bool exclude_self = true;

  void validate() const;
};

// S[i, j] = <a_i, b_j> / (|a_i| |b_j|). Zero rows raise DegenerateInputError.
ad::Var cosine_similarity_matrix(const ad::Var& a, const ad::Var& b);

// Contrastive loss over a batch of paired views. The 2B embeddings
// [z; z2] are compared by cosine similarity / temperature; row i's positive
// is its partner view and the remaining rows act as negatives. Returns
//   -(1 / 2B) sum_i log softmax_i(positive(i)),
// which is >= 0. Requires B >= 2 (ConfigError otherwise).
ad::Var info_nce(const ad::Var& z, const ad::Var& z2, const InfoNceConfig& cfg);

// Mean negative log-likelihood of `labels` under softmax(logits).
// Labels outside [0, classes) raise InputError.
ad::Var cross_entropy(const ad::Var& logits, std::span<const std::size_t> labels);

}  // namespace tocomm::loss

#endif  // TOCOMM_LOSS_H_
