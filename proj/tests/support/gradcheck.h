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

#ifndef TOCOMM_TESTS_SUPPORT_GRADCHECK_H_
#define TOCOMM_TESTS_SUPPORT_GRADCHECK_H_

// Central finite-difference oracle for reverse-mode gradients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "tocomm/autodiff.h"
#include "tocomm/random.h"

namespace tocomm::testing {

// Builds a scalar loss from parameter leaves bound to `params`.
using LossFn = std::function<ad::Var(ad::Graph&, std::vector<ad::Var>&)>;

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;
};

inline double evaluate_loss(const LossFn& fn, std::vector<ad::Tensor>& params) {
  ad::Graph g;
  std::vector<ad::Var> leaves;
  for (auto& p : params) leaves.push_back(g.constant(p));
  const double v = fn(g, leaves).value().item();
  g.clear();
  return v;
}

// |a - n| / max(|a|, |n|, floor)
inline double rel_error(double a, double n, double floor = 1e-6) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
}

// Compares backward() against (f(p + h) - f(p - h)) / 2h. When
// `max_coords` is nonzero each tensor is probed at that many random entries.
inline GradCheck check_gradients(const LossFn& fn, std::vector<ad::Tensor> params,
                                 double h = 1e-5, std::size_t max_coords = 0,
                                 std::uint64_t seed = 7) {
  for (auto& p : params) {
    p.set_requires_grad(true);
    p.clear_grad();
  }
  {
    ad::Graph g;
    std::vector<ad::Var> leaves;
    for (auto& p : params) leaves.push_back(g.parameter(p));
    g.backward(fn(g, leaves));
  }
  std::vector<std::vector<double>> analytic;
  for (auto& p : params) analytic.emplace_back(p.grad().begin(), p.grad().end());

  GradCheck out;
  Rng rng = make_rng(seed, 99);
  for (std::size_t t = 0; t < params.size(); ++t) {
    std::vector<std::size_t> coords(params[t].size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    if (max_coords != 0 && coords.size() > max_coords) {
      shuffle(coords, rng);
      coords.resize(max_coords);
    }
    for (std::size_t i : coords) {
      const double orig = params[t].data()[i];
      params[t].data()[i] = orig + h;
      const double up = evaluate_loss(fn, params);
      params[t].data()[i] = orig - h;
      const double down = evaluate_loss(fn, params);
      params[t].data()[i] = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double err = rel_error(analytic[t][i], numeric);
      ++out.checked;
      if (err > out.max_rel_error) {
        out.max_rel_error = err;
        out.worst = "tensor " + std::to_string(t) + " entry " + std::to_string(i) +
                    ": analytic " + std::to_string(analytic[t][i]) + " numeric " +
                    std::to_string(numeric);
      }
    }
  }
  return out;
}

// Gaussian tensor; entries pushed at least `gap` away from zero when gap > 0.
inline ad::Tensor random_tensor(ad::Shape shape, Rng& rng, double gap = 0.0) {
  ad::Tensor t(std::move(shape));
  for (double& v : t.data()) {
    v = standard_normal(rng);
    if (gap > 0.0 && std::abs(v) < gap) v = v < 0.0 ? v - gap : v + gap;
  }
  return t;
}

inline ad::Tensor random_positive(ad::Shape shape, Rng& rng) {
  ad::Tensor t(std::move(shape));
  for (double& v : t.data()) v = uniform(rng, 0.5, 2.0);
  return t;
}

}  // namespace tocomm::testing

#endif  // TOCOMM_TESTS_SUPPORT_GRADCHECK_H_
