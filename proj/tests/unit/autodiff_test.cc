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

#include "tocomm/autodiff.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "../support/op_catalog.h"
#include "tocomm/errors.h"

namespace tocomm::ad {
namespace {

using tocomm::testing::check_gradients;
using tocomm::testing::op_catalog;

TEST(GradientOracle, EveryOpMatchesCentralDifferences) {
  for (const auto& op : op_catalog()) {
    SCOPED_TRACE(op.name);
    for (std::uint64_t point = 0; point < 20; ++point) {
      Rng rng = make_rng(point, 500);
      const auto result = check_gradients(op.loss, op.inputs(rng), 1e-5, op.max_coords);
      EXPECT_LT(result.max_rel_error, 1e-4) << "point " << point << ": " << result.worst;
    }
  }
}

TEST(Tensor, ScalarHoldsValue) {
  const Tensor t = Tensor::scalar(3.25);
  EXPECT_EQ(t.shape(), (Shape{1, 1}));
  EXPECT_DOUBLE_EQ(t.item(), 3.25);
  EXPECT_FALSE(t.requires_grad());
}

TEST(Tensor, FromRowsIsRowMajor) {
  const Tensor t = Tensor::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_DOUBLE_EQ(t(1, 0), 4.0);
  EXPECT_THROW(Tensor::from_rows({{1, 2}, {3}}), DimensionError);
}

TEST(Tensor, GradSlot) {
  Tensor t({2, 2});
  EXPECT_FALSE(t.has_grad());
  EXPECT_THROW(t.grad(), StateError);
  t.mutable_grad()[1] = 2.0;
  EXPECT_DOUBLE_EQ(t.grad()[1], 2.0);
  t.zero_grad();
  EXPECT_DOUBLE_EQ(t.grad()[1], 0.0);
}

TEST(Graph, MatmulValue) {
  Graph g;
  const Var a = g.constant(Tensor::from_rows({{1, 2}, {3, 4}}));
  const Var b = g.constant(Tensor::from_rows({{5}, {6}}));
  const Var c = matmul(a, b);
  EXPECT_DOUBLE_EQ(c.value()(0, 0), 17.0);
  EXPECT_DOUBLE_EQ(c.value()(1, 0), 39.0);
  EXPECT_THROW(matmul(b, b), DimensionError);
}

TEST(Graph, ParameterGradientAccumulatesOverUses) {
  Tensor p = Tensor::from_rows({{2.0}});
  p.set_requires_grad(true);
  Graph g;
  const Var x = g.parameter(p);
  g.backward(mul(x, x) + x);  // d/dp (p^2 + p) = 2p + 1
  EXPECT_DOUBLE_EQ(p.grad()[0], 5.0);
}

TEST(Graph, FrozenParameterGetsNoGradient) {
  Tensor p = Tensor::from_rows({{2.0}});
  Tensor q = Tensor::from_rows({{3.0}});
  q.set_requires_grad(true);
  Graph g;
  g.backward(mul(g.parameter(p), g.parameter(q)));
  EXPECT_FALSE(p.has_grad());
  EXPECT_DOUBLE_EQ(q.grad()[0], 2.0);
}

TEST(Graph, VarIsStaleAfterBackward) {
  Tensor p = Tensor::from_rows({{1.0}});
  p.set_requires_grad(true);
  Graph g;
  const Var x = g.parameter(p);
  const Var y = scale(x, 2.0);
  g.backward(y);
  EXPECT_THROW(y.value(), StateError);
  EXPECT_EQ(g.node_count(), 0u);
}

TEST(Graph, BackwardNeedsScalar) {
  Graph g;
  const Var x = g.constant(Tensor({2, 2}));
  EXPECT_THROW(g.backward(x), DimensionError);
}

TEST(Graph, BackwardFromUsesSeed) {
  Tensor p = Tensor::from_rows({{1.0, 2.0}});
  p.set_requires_grad(true);
  Graph g;
  const Var y = scale(g.parameter(p), 3.0);
  const double seed[] = {0.5, -1.0};
  g.backward_from(y, seed);
  EXPECT_DOUBLE_EQ(p.grad()[0], 1.5);
  EXPECT_DOUBLE_EQ(p.grad()[1], -3.0);
}

TEST(Ops, LogRejectsNonPositive) {
  Graph g;
  EXPECT_THROW(log(g.constant(Tensor::from_rows({{1.0, 0.0}}))), DomainError);
}

TEST(Ops, ExpOverflowIsNumericError) {
  Graph g;
  EXPECT_THROW(exp(g.constant(Tensor::from_rows({{1000.0}}))), NumericError);
}

TEST(Ops, NonFiniteConstantRejected) {
  Graph g;
  EXPECT_THROW(g.constant(Tensor::from_rows({{std::numeric_limits<double>::quiet_NaN()}})),
               NumericError);
}

TEST(Ops, LogSoftmaxExcludingDiagonal) {
  Graph g;
  const Var x = g.constant(Tensor::from_rows({{9.0, 0.0, 0.0}, {0.0, 9.0, 0.0}, {0.0, 0.0, 9.0}}));
  const Var y = log_softmax(x, true);
  // Off-diagonal entries of each row are uniform over the two candidates.
  EXPECT_NEAR(y.value()(0, 1), std::log(0.5), 1e-15);
  EXPECT_NEAR(y.value()(2, 0), std::log(0.5), 1e-15);
}

TEST(Ops, RowNormalizeSetsNorm) {
  Graph g;
  const Var y = row_normalize(g.constant(Tensor::from_rows({{3.0, 4.0}})), 10.0);
  EXPECT_DOUBLE_EQ(y.value()(0, 0), 6.0);
  EXPECT_DOUBLE_EQ(y.value()(0, 1), 8.0);
  EXPECT_THROW(row_normalize(g.constant(Tensor({1, 2})), 1.0), DegenerateInputError);
}

TEST(Ops, SelectPerRowChecksRange) {
  Graph g;
  const Var x = g.constant(Tensor({2, 2}));
  const std::size_t bad[] = {0, 2};
  EXPECT_THROW(select_per_row(x, bad), InputError);
}

TEST(Sgd, PlainStep) {
  Tensor p = Tensor::from_rows({{1.0, -1.0}});
  p.set_requires_grad(true);
  p.mutable_grad()[0] = 10.0;
  p.mutable_grad()[1] = -20.0;
  Sgd opt({0.1, 0.0});
  Tensor* params[] = {&p};
  opt.step(params);
  EXPECT_DOUBLE_EQ(p.data()[0], 0.0);
  EXPECT_DOUBLE_EQ(p.data()[1], 1.0);
  EXPECT_DOUBLE_EQ(p.grad()[0], 0.0);
}

TEST(Sgd, MomentumAccumulates) {
  Tensor p = Tensor::from_rows({{0.0}});
  p.set_requires_grad(true);
  Sgd opt({1.0, 0.5});
  Tensor* params[] = {&p};
  p.mutable_grad()[0] = 1.0;
  opt.step(params);  // v = 1, p = -1
  p.mutable_grad()[0] = 1.0;
  opt.step(params);  // v = 1.5, p = -2.5
  EXPECT_DOUBLE_EQ(p.data()[0], -2.5);
}

TEST(Sgd, MissingGradientIsStateError) {
  Tensor p = Tensor::from_rows({{0.0}});
  Sgd opt({});
  Tensor* params[] = {&p};
  EXPECT_THROW(opt.step(params), StateError);
}

TEST(Sgd, ConfigValidation) {
  try {
    SgdConfig{-1.0, 0.0}.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "train.learning_rate");
  }
  EXPECT_THROW((SgdConfig{0.1, 1.0}.validate()), ConfigError);
  EXPECT_DOUBLE_EQ(SgdConfig{}.learning_rate, 1e-3);
}

}  // namespace
}  // namespace tocomm::ad
