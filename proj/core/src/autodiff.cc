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

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

#include "tocomm/errors.h"

namespace tocomm::ad {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

std::size_t product(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

void require_rank2(const Var& v, const char* op) {
  if (v.value().rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a rank-2 operand, got " +
                         shape_string(v.shape()));
  }
}

ConstMap as_matrix(const Tensor& t) {
  return ConstMap(t.data().data(), static_cast<Eigen::Index>(t.rows()),
                  static_cast<Eigen::Index>(t.cols()));
}

enum class Broadcast { kEqual, kLeftScalar, kRightScalar };

Broadcast classify(const Var& a, const Var& b, const char* op) {
  if (a.shape() == b.shape()) return Broadcast::kEqual;
  if (a.value().is_scalar()) return Broadcast::kLeftScalar;
  if (b.value().is_scalar()) return Broadcast::kRightScalar;
  throw DimensionError(std::string(op) + ": incompatible shapes " +
                       shape_string(a.shape()) + " and " +
                       shape_string(b.shape()));
}

// Elementwise binary op with scalar broadcasting. `f` computes the value,
// `da`/`db` compute the local partial derivatives at (x, y).
template <typename F, typename DA, typename DB>
Var binary(const char* tag, const Var& a, const Var& b, F f, DA da, DB db) {
  const Broadcast mode = classify(a, b, tag);
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  const Shape& out_shape = mode == Broadcast::kLeftScalar ? tb.shape()
                                                          : ta.shape();
  const std::size_t n = product(out_shape);
  auto at_a = [&ta, mode](std::size_t i) {
    return mode == Broadcast::kLeftScalar ? ta.data()[0] : ta.data()[i];
  };
  auto at_b = [&tb, mode](std::size_t i) {
    return mode == Broadcast::kRightScalar ? tb.data()[0] : tb.data()[i];
  };
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(at_a(i), at_b(i));

  std::vector<double> xa(ta.data().begin(), ta.data().end());
  std::vector<double> xb(tb.data().begin(), tb.data().end());
  return a.graph().record(
      tag, {a, b}, Tensor(out_shape, std::move(out)),
      [xa = std::move(xa), xb = std::move(xb), mode, n, da, db](
          std::span<const double> g, GradBuffers in) {
        for (std::size_t i = 0; i < n; ++i) {
          const double x = mode == Broadcast::kLeftScalar ? xa[0] : xa[i];
          const double y = mode == Broadcast::kRightScalar ? xb[0] : xb[i];
          if (in[0]) {
            (*in[0])[mode == Broadcast::kLeftScalar ? 0 : i] += g[i] * da(x, y);
          }
          if (in[1]) {
            (*in[1])[mode == Broadcast::kRightScalar ? 0 : i] +=
                g[i] * db(x, y);
          }
        }
      });
}

}  // namespace

// --- Tensor ---------------------------------------------------------------

Tensor::Tensor(Shape shape, bool requires_grad)
    : shape_(std::move(shape)), requires_grad_(requires_grad) {
  for (std::size_t extent : shape_) {
    if (extent == 0) {
      throw DimensionError("tensor extents must be positive, got " +
                           shape_string(shape_));
    }
  }
  data_.assign(product(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad)
    : Tensor(std::move(shape), requires_grad) {
  if (data.size() != data_.size()) {
    throw DimensionError("tensor data length " + std::to_string(data.size()) +
                         " does not match shape " + shape_string(shape_));
  }
  data_ = std::move(data);
}

Tensor Tensor::scalar(double value) { return Tensor({1, 1}, std::vector<double>{value}); }

Tensor Tensor::full(Shape shape, double value) {
  Tensor t(std::move(shape));
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

Tensor Tensor::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0 || rows.begin()->size() == 0) {
    throw DimensionError("from_rows: empty matrix");
  }
  const std::size_t cols = rows.begin()->size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw DimensionError("from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor({rows.size(), cols}, std::move(data));
}

std::size_t Tensor::rows() const { return shape_.empty() ? 1 : shape_[0]; }

std::size_t Tensor::cols() const {
  std::size_t c = 1;
  for (std::size_t i = 1; i < shape_.size(); ++i) c *= shape_[i];
  return c;
}

double Tensor::item() const {
  if (!is_scalar()) {
    throw DimensionError("item() on non-scalar tensor " + shape_string(shape_));
  }
  return data_[0];
}

std::span<const double> Tensor::grad() const {
  if (!grad_) throw StateError("tensor has no gradient");
  return *grad_;
}

std::span<double> Tensor::mutable_grad() {
  if (!grad_) grad_.emplace(data_.size(), 0.0);
  return *grad_;
}

void Tensor::zero_grad() {
  if (grad_) std::fill(grad_->begin(), grad_->end(), 0.0);
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

// --- Var / Graph ------------------------------------------------------------

const Tensor& Var::value() const { return graph().node(*this).value; }

Graph& Var::graph() const {
  if (graph_ == nullptr) throw StateError("use of an unbound Var");
  return *graph_;
}

bool Var::requires_grad() const { return graph().node(*this).requires_grad; }

const Graph::Node& Graph::node(const Var& v) const {
  if (v.graph_ != this || v.generation_ != generation_ ||
      v.id_ >= nodes_.size()) {
    throw StateError(
        "stale Var: the graph was cleared (backward already ran or clear() "
        "was called); run a new forward pass");
  }
  return nodes_[v.id_];
}

std::string_view Graph::tag(const Var& v) const { return node(v).tag; }

Var Graph::constant(Tensor value) {
  if (!value.all_finite()) throw NumericError("constant: non-finite entry");
  nodes_.push_back(Node{"constant", {}, std::move(value), false, nullptr, {}});
  return Var(this, nodes_.size() - 1, generation_);
}

Var Graph::parameter(Tensor& param) {
  if (!param.all_finite()) throw NumericError("parameter: non-finite entry");
  // The node keeps its own copy of the value so later in-place updates of
  // the parameter cannot alter recorded activations.
  nodes_.push_back(
      Node{"parameter", {}, param, param.requires_grad(), &param, {}});
  return Var(this, nodes_.size() - 1, generation_);
}

Var Graph::record(std::string_view tag, std::vector<Var> inputs, Tensor value,
                  BackwardFn backward) {
  if (!value.all_finite()) {
    throw NumericError(std::string(tag) + ": produced a non-finite value");
  }
  Node n;
  n.tag = tag;
  n.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    const Node& src = node(in);
    n.requires_grad = n.requires_grad || src.requires_grad;
    n.inputs.push_back(in.id_);
  }
  n.value = std::move(value);
  n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1, generation_);
}

void Graph::backward(const Var& loss) {
  const Node& root = node(loss);
  if (!root.value.is_scalar()) {
    throw DimensionError("backward: loss must be a scalar, got shape " +
                         shape_string(root.value.shape()));
  }
  const double one = 1.0;
  backward_from(loss, std::span<const double>(&one, 1));
}

void Graph::backward_from(const Var& output, std::span<const double> seed) {
  const Node& root = node(output);
  if (seed.size() != root.value.size()) {
    throw DimensionError("backward: seed gradient has " +
                         std::to_string(seed.size()) + " entries for a value of " +
                         std::to_string(root.value.size()));
  }
  const Var& loss = output;
  std::vector<std::vector<double>> grads(nodes_.size());
  grads[loss.id_].assign(seed.begin(), seed.end());

  std::vector<std::vector<double>*> buffers;
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || grads[i].empty()) continue;
    if (n.parameter != nullptr) {
      auto dst = n.parameter->mutable_grad();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += grads[i][k];
      continue;
    }
    buffers.assign(n.inputs.size(), nullptr);
    for (std::size_t k = 0; k < n.inputs.size(); ++k) {
      const std::size_t src = n.inputs[k];
      if (!nodes_[src].requires_grad) continue;
      if (grads[src].empty()) grads[src].assign(nodes_[src].value.size(), 0.0);
      buffers[k] = &grads[src];
    }
    n.backward(grads[i], buffers);
    // Intermediate gradients are not needed past this point.
    std::vector<double>().swap(grads[i]);
  }
  for (Node& n : nodes_) {
    if (n.parameter != nullptr && n.requires_grad) n.parameter->mutable_grad();
  }
  clear();
}

void Graph::clear() {
  nodes_.clear();
  ++generation_;
}

// --- Operations -----------------------------------------------------------

Var matmul(const Var& a, const Var& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    throw DimensionError("matmul: inner dimensions differ: " +
                         shape_string(a.shape()) + " x " +
                         shape_string(b.shape()));
  }
  Tensor out({m, n});
  MutMap(out.data().data(), static_cast<Eigen::Index>(m),
         static_cast<Eigen::Index>(n))
      .noalias() = as_matrix(a.value()) * as_matrix(b.value());
  Tensor saved_a = a.value();
  Tensor saved_b = b.value();
  return a.graph().record(
      "matmul", {a, b}, std::move(out),
      [sa = std::move(saved_a), sb = std::move(saved_b), m, k, n](
          std::span<const double> g, GradBuffers in) {
        ConstMap dc(g.data(), static_cast<Eigen::Index>(m),
                    static_cast<Eigen::Index>(n));
        if (in[0]) {
          MutMap(in[0]->data(), static_cast<Eigen::Index>(m),
                 static_cast<Eigen::Index>(k))
              .noalias() += dc * as_matrix(sb).transpose();
        }
        if (in[1]) {
          MutMap(in[1]->data(), static_cast<Eigen::Index>(k),
                 static_cast<Eigen::Index>(n))
              .noalias() += as_matrix(sa).transpose() * dc;
        }
      });
}

Var transpose(const Var& a) {
  require_rank2(a, "transpose");
  const std::size_t m = a.rows(), n = a.cols();
  Tensor out({n, m});
  const Tensor& x = a.value();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out(j, i) = x(i, j);
  return a.graph().record("transpose", {a}, std::move(out),
                          [m, n](std::span<const double> g, GradBuffers in) {
                            if (!in[0]) return;
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t j = 0; j < n; ++j)
                                (*in[0])[i * n + j] += g[j * m + i];
                          });
}

Var add(const Var& a, const Var& b) {
  return binary(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Var sub(const Var& a, const Var& b) {
  return binary(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Var mul(const Var& a, const Var& b) {
  return binary(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double, double y) { return y; }, [](double x, double) { return x; });
}

Var scale(const Var& a, double factor) {
  Tensor out = a.value();
  out.set_requires_grad(false);
  out.clear_grad();
  for (double& v : out.data()) v *= factor;
  return a.graph().record("scale", {a}, std::move(out),
                          [factor](std::span<const double> g, GradBuffers in) {
                            if (!in[0]) return;
                            for (std::size_t i = 0; i < g.size(); ++i)
                              (*in[0])[i] += factor * g[i];
                          });
}

Var add_scalar(const Var& a, double value) {
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = a.value().data()[i] + value;
  return a.graph().record("add_scalar", {a}, std::move(out),
                          [](std::span<const double> g, GradBuffers in) {
                            if (!in[0]) return;
                            for (std::size_t i = 0; i < g.size(); ++i)
                              (*in[0])[i] += g[i];
                          });
}

Var neg(const Var& a) { return scale(a, -1.0); }

Var relu(const Var& a) {
  Tensor out(a.shape());
  std::vector<char> active(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = a.value().data()[i];
    active[i] = x > 0.0;
    out.data()[i] = active[i] ? x : 0.0;
  }
  return a.graph().record(
      "relu", {a}, std::move(out),
      [active = std::move(active)](std::span<const double> g, GradBuffers in) {
        if (!in[0]) return;
        for (std::size_t i = 0; i < g.size(); ++i)
          if (active[i]) (*in[0])[i] += g[i];
      });
}

Var exp(const Var& a) {
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = std::exp(a.value().data()[i]);
  std::vector<double> y(out.data().begin(), out.data().end());
  return a.graph().record(
      "exp", {a}, std::move(out),
      [y = std::move(y)](std::span<const double> g, GradBuffers in) {
        if (!in[0]) return;
        for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += g[i] * y[i];
      });
}

Var log(const Var& a) {
  Tensor out(a.shape());
  std::vector<double> x(a.value().data().begin(), a.value().data().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(x[i] > 0.0)) {
      throw DomainError("log: non-positive entry " + std::to_string(x[i]) +
                        " at flat index " + std::to_string(i));
    }
    out.data()[i] = std::log(x[i]);
  }
  return a.graph().record(
      "log", {a}, std::move(out),
      [x = std::move(x)](std::span<const double> g, GradBuffers in) {
        if (!in[0]) return;
        for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += g[i] / x[i];
      });
}

Var sum(const Var& a) {
  const auto& d = a.value().data();
  const double total = std::accumulate(d.begin(), d.end(), 0.0);
  return a.graph().record("sum", {a}, Tensor::scalar(total),
                          [](std::span<const double> g, GradBuffers in) {
                            if (!in[0]) return;
                            for (double& v : *in[0]) v += g[0];
                          });
}

Var mean(const Var& a) {
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var add_row(const Var& x, const Var& bias) {
  require_rank2(x, "add_row");
  require_rank2(bias, "add_row");
  const std::size_t m = x.rows(), n = x.cols();
  if (bias.rows() != 1 || bias.cols() != n) {
    throw DimensionError("add_row: bias " + shape_string(bias.shape()) +
                         " does not match rows of " + shape_string(x.shape()));
  }
  Tensor out = x.value();
  out.set_requires_grad(false);
  out.clear_grad();
  const auto b = bias.value().data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) += b[j];
  return x.graph().record("add_row", {x, bias}, std::move(out),
                          [m, n](std::span<const double> g, GradBuffers in) {
                            if (in[0]) {
                              for (std::size_t i = 0; i < m * n; ++i)
                                (*in[0])[i] += g[i];
                            }
                            if (in[1]) {
                              for (std::size_t i = 0; i < m; ++i)
                                for (std::size_t j = 0; j < n; ++j)
                                  (*in[1])[j] += g[i * n + j];
                            }
                          });
}

Var log_softmax(const Var& x, bool exclude_diagonal) {
  require_rank2(x, "log_softmax");
  const std::size_t m = x.rows(), n = x.cols();
  if (exclude_diagonal && m != n) {
    throw DimensionError("log_softmax: diagonal exclusion needs a square input");
  }
  if (exclude_diagonal && n < 2) {
    throw DimensionError("log_softmax: diagonal exclusion needs >= 2 columns");
  }
  const Tensor& in = x.value();
  Tensor out({m, n});
  // Softmax probabilities, kept for the backward pass.
  std::vector<double> prob(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (exclude_diagonal && i == j) continue;
      hi = std::max(hi, in(i, j));
    }
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (exclude_diagonal && i == j) continue;
      total += std::exp(in(i, j) - hi);
    }
    const double log_total = std::log(total);
    for (std::size_t j = 0; j < n; ++j) {
      if (exclude_diagonal && i == j) continue;
      out(i, j) = in(i, j) - hi - log_total;
      prob[i * n + j] = std::exp(out(i, j));
    }
  }
  return x.graph().record(
      "log_softmax", {x}, std::move(out),
      [prob = std::move(prob), m, n, exclude_diagonal](
          std::span<const double> g, GradBuffers grads) {
        if (!grads[0]) return;
        for (std::size_t i = 0; i < m; ++i) {
          double row_total = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            if (exclude_diagonal && i == j) continue;
            row_total += g[i * n + j];
          }
          for (std::size_t j = 0; j < n; ++j) {
            if (exclude_diagonal && i == j) continue;
            (*grads[0])[i * n + j] += g[i * n + j] - prob[i * n + j] * row_total;
          }
        }
      });
}

Var row_normalize(const Var& x, double norm) {
  require_rank2(x, "row_normalize");
  const std::size_t m = x.rows(), n = x.cols();
  const Tensor& in = x.value();
  Tensor out({m, n});
  std::vector<double> inv_norm(m);
  for (std::size_t i = 0; i < m; ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) sq += in(i, j) * in(i, j);
    if (!(sq > 0.0)) {
      throw DegenerateInputError("row_normalize: row " + std::to_string(i) +
                                 " has zero norm");
    }
    inv_norm[i] = 1.0 / std::sqrt(sq);
    for (std::size_t j = 0; j < n; ++j) out(i, j) = in(i, j) * inv_norm[i] * norm;
  }
  // Unit-norm rows u; y = norm * u, dy/dx = norm/|x| (I - u u^T).
  std::vector<double> unit(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      unit[i * n + j] = in(i, j) * inv_norm[i];
  return x.graph().record(
      "row_normalize", {x}, std::move(out),
      [unit = std::move(unit), inv_norm = std::move(inv_norm), m, n, norm](
          std::span<const double> g, GradBuffers grads) {
        if (!grads[0]) return;
        for (std::size_t i = 0; i < m; ++i) {
          double dot = 0.0;
          for (std::size_t j = 0; j < n; ++j) dot += g[i * n + j] * unit[i * n + j];
          const double c = norm * inv_norm[i];
          for (std::size_t j = 0; j < n; ++j)
            (*grads[0])[i * n + j] += c * (g[i * n + j] - dot * unit[i * n + j]);
        }
      });
}

Var concat_rows(const Var& a, const Var& b) {
  require_rank2(a, "concat_rows");
  require_rank2(b, "concat_rows");
  if (a.cols() != b.cols()) {
    throw DimensionError("concat_rows: column counts differ: " +
                         shape_string(a.shape()) + " and " +
                         shape_string(b.shape()));
  }
  const std::size_t na = a.value().size(), nb = b.value().size();
  std::vector<double> data;
  data.reserve(na + nb);
  data.insert(data.end(), a.value().data().begin(), a.value().data().end());
  data.insert(data.end(), b.value().data().begin(), b.value().data().end());
  Tensor out({a.rows() + b.rows(), a.cols()}, std::move(data));
  return a.graph().record("concat_rows", {a, b}, std::move(out),
                          [na, nb](std::span<const double> g, GradBuffers in) {
                            if (in[0])
                              for (std::size_t i = 0; i < na; ++i)
                                (*in[0])[i] += g[i];
                            if (in[1])
                              for (std::size_t i = 0; i < nb; ++i)
                                (*in[1])[i] += g[na + i];
                          });
}

Var select_per_row(const Var& x, std::span<const std::size_t> cols) {
  require_rank2(x, "select_per_row");
  const std::size_t m = x.rows(), n = x.cols();
  if (cols.size() != m) {
    throw DimensionError("select_per_row: " + std::to_string(cols.size()) +
                         " indices for " + std::to_string(m) + " rows");
  }
  Tensor out({m, 1});
  std::vector<std::size_t> idx(cols.begin(), cols.end());
  for (std::size_t i = 0; i < m; ++i) {
    if (idx[i] >= n) {
      throw InputError("select_per_row: column " + std::to_string(idx[i]) +
                       " out of range for row " + std::to_string(i));
    }
    out(i, 0) = x.value()(i, idx[i]);
  }
  return x.graph().record(
      "select_per_row", {x}, std::move(out),
      [idx = std::move(idx), n](std::span<const double> g, GradBuffers in) {
        if (!in[0]) return;
        for (std::size_t i = 0; i < idx.size(); ++i)
          (*in[0])[i * n + idx[i]] += g[i];
      });
}

// --- Optimizer ------------------------------------------------------------

void SgdConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("sgd learning_rate must be positive",
                      "train.learning_rate");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("sgd momentum must lie in [0, 1)", "train.momentum");
  }
}

Sgd::Sgd(SgdConfig config) : config_(config) { config_.validate(); }

void Sgd::step(std::span<Tensor* const> params) {
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (!params[p]->has_grad()) {
      throw StateError("sgd step: parameter " + std::to_string(p) +
                       " has no gradient");
    }
  }
  if (velocity_.empty() && config_.momentum > 0.0) {
    velocity_.resize(params.size());
    for (std::size_t p = 0; p < params.size(); ++p)
      velocity_[p].assign(params[p]->size(), 0.0);
  }
  if (config_.momentum > 0.0 && velocity_.size() != params.size()) {
    throw StateError("sgd step: parameter list changed between steps");
  }
  const double lr = config_.learning_rate;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& param = *params[p];
    auto grad = param.mutable_grad();
    auto data = param.data();
    if (config_.momentum > 0.0) {
      auto& v = velocity_[p];
      if (v.size() != data.size()) {
        throw StateError("sgd step: parameter shape changed between steps");
      }
      for (std::size_t i = 0; i < data.size(); ++i) {
        v[i] = config_.momentum * v[i] + grad[i];
        data[i] -= lr * v[i];
      }
    } else {
      for (std::size_t i = 0; i < data.size(); ++i) data[i] -= lr * grad[i];
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    if (!param.all_finite()) {
      throw NumericError("sgd step produced a non-finite parameter");
    }
  }
}

}  // namespace tocomm::ad
