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

#include <gtest/gtest.h>

#include <cmath>

#include "tocomm/errors.h"
#include "tocomm/random.h"

namespace tocomm::loss {
namespace {

using ad::Graph;
using ad::Tensor;

Tensor random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  Tensor t({rows, cols});
  for (double& v : t.data()) v = standard_normal(rng);
  return t;
}

double nce(const Tensor& a, const Tensor& b, InfoNceConfig cfg = {}) {
  Graph g;
  return info_nce(g.constant(a), g.constant(b), cfg).value().item();
}

TEST(InfoNce, DefaultTemperature) { EXPECT_DOUBLE_EQ(InfoNceConfig{}.temperature, 0.1); }

TEST(InfoNce, IdenticalEmbeddingsGiveLogOfCandidates) {
  for (std::size_t b : {2u, 5u, 16u}) {
    const Tensor same = Tensor::full({b, 4}, 0.7);
    EXPECT_NEAR(nce(same, same), std::log(2.0 * b - 1.0), 1e-12);
    InfoNceConfig with_self;
    with_self.exclude_self = false;
    EXPECT_NEAR(nce(same, same, with_self), std::log(2.0 * b), 1e-12);
  }
}

TEST(InfoNce, NonNegative) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Tensor a = random_matrix(6, 8, s);
    Tensor b = a;
    if (s % 2) b = random_matrix(6, 8, s + 100);
    EXPECT_GE(nce(a, b), 0.0);
  }
}

TEST(InfoNce, ScaleInvariant) {
  const Tensor a = random_matrix(5, 6, 1), b = random_matrix(5, 6, 2);
  Tensor a2 = a, b2 = b;
  for (double& v : a2.data()) v *= 3.5;
  for (double& v : b2.data()) v *= 0.01;
  EXPECT_NEAR(nce(a, b), nce(a2, b2), 1e-9);
}

TEST(InfoNce, ViewSymmetric) {
  const Tensor a = random_matrix(5, 6, 3), b = random_matrix(5, 6, 4);
  EXPECT_NEAR(nce(a, b), nce(b, a), 1e-9);
}

TEST(InfoNce, AlignedViewsBeatRandomPairs) {
  const Tensor a = random_matrix(8, 16, 5);
  EXPECT_LT(nce(a, a), nce(a, random_matrix(8, 16, 6)));
}

TEST(InfoNce, NeedsNegatives) {
  const Tensor one = random_matrix(1, 4, 7);
  try {
    nce(one, one);
    FAIL();
  } catch (const ConfigError&) {
  }
  InfoNceConfig bad;
  bad.temperature = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(CosineSimilarity, Values) {
  Graph g;
  const Tensor s = cosine_similarity_matrix(g.constant(Tensor::from_rows({{1, 0}, {1, 1}})),
                                            g.constant(Tensor::from_rows({{2, 0}, {0, 3}})))
                       .value();
  EXPECT_NEAR(s(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(s(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(s(1, 0), std::sqrt(0.5), 1e-15);
}

TEST(CrossEntropy, UniformLogits) {
  Graph g;
  const std::size_t labels[] = {0, 3, 1};
  const double l = cross_entropy(g.constant(Tensor({3, 5})), labels).value().item();
  EXPECT_NEAR(l, std::log(5.0), 1e-14);
}

TEST(CrossEntropy, MatchesDirectFormula) {
  Graph g;
  const Tensor logits = Tensor::from_rows({{1.0, 2.0, -1.0}, {0.5, 0.0, 3.0}});
  const std::size_t labels[] = {1, 0};
  const double l = cross_entropy(g.constant(logits), labels).value().item();
  double expect = 0.0;
  for (std::size_t r = 0; r < 2; ++r) {
    double z = 0.0;
    for (std::size_t c = 0; c < 3; ++c) z += std::exp(logits(r, c));
    expect += std::log(z) - logits(r, labels[r]);
  }
  EXPECT_NEAR(l, expect / 2.0, 1e-14);
}

TEST(CrossEntropy, RejectsBadLabels) {
  Graph g;
  const std::size_t labels[] = {0, 5};
  EXPECT_THROW(cross_entropy(g.constant(Tensor({2, 5})), labels), InputError);
}

}  // namespace
}  // namespace tocomm::loss
