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

#include <benchmark/benchmark.h>

#include "tocomm/autodiff.h"
#include "tocomm/data.h"
#include "tocomm/infotheory.h"
#include "tocomm/loss.h"
#include "tocomm/model.h"
#include "tocomm/random.h"
#include "tocomm/trainer.h"

namespace {

using namespace tocomm;

ad::Tensor random_tensor(ad::Shape shape, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  ad::Tensor t(std::move(shape));
  for (double& v : t.data()) v = standard_normal(rng);
  return t;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ad::Tensor a = random_tensor({n, n}, 1), b = random_tensor({n, n}, 2);
  for (auto _ : state) {
    ad::Graph g;
    benchmark::DoNotOptimize(ad::matmul(g.constant(a), g.constant(b)).value().data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

void BM_InfoNceForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  ad::Tensor a = random_tensor({batch, 32}, 3), b = random_tensor({batch, 32}, 4);
  a.set_requires_grad(true);
  b.set_requires_grad(true);
  const loss::InfoNceConfig cfg;
  for (auto _ : state) {
    a.clear_grad();
    b.clear_grad();
    ad::Graph g;
    g.backward(loss::info_nce(g.parameter(a), g.parameter(b), cfg));
    benchmark::DoNotOptimize(a.grad().data());
  }
}
BENCHMARK(BM_InfoNceForwardBackward)->Arg(32)->Arg(128);

void BM_EncoderEnumeration(benchmark::State& state) {
  info::PgmShape shape;
  shape.min_alphabet = static_cast<std::size_t>(state.range(0));
  shape.max_alphabet = shape.min_alphabet;
  shape.view_branch = false;
  Rng rng = make_rng(5, 0);
  const info::Pgm pgm = info::random_pgm(shape, rng);
  for (auto _ : state) {
    const auto s = info::enumerate_optimal_encoder(pgm, pgm.channel, info::Target::kView);
    benchmark::DoNotOptimize(s.value);
  }
}
BENCHMARK(BM_EncoderEnumeration)->Arg(3)->Arg(4);

void BM_SplitRound(benchmark::State& state) {
  train::TrainConfig cfg;
  cfg.encoder.input_dim = 64;
  cfg.receiver.num_classes = 20;
  model::SplitModel m{train::init_encoder(cfg), train::init_receiver(cfg), cfg.channel};
  const data::BlobSpec spec{20, 8, 64, 5.0};
  const data::Dataset ds = data::make_blobs(spec, 6);
  std::vector<std::size_t> idx(128);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i % ds.size();
  const ad::Tensor x = data::gather_rows(ds.features, idx);
  const auto y = data::gather_labels(ds, idx);
  ad::Sgd dev(cfg.sgd), srv(cfg.sgd);
  Rng rng = make_rng(7, 0);
  train::LinkStats link;
  for (auto _ : state) {
    const auto out = train::split_round(m, x, y, dev, srv, rng, link);
    benchmark::DoNotOptimize(out.loss);
  }
}
BENCHMARK(BM_SplitRound);

}  // namespace

BENCHMARK_MAIN();
