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

#ifndef TOCOMM_AUTODIFF_H_
#define TOCOMM_AUTODIFF_H_

// Dense fp64 tensors and a define-by-run reverse-mode differentiation tape.
//
// A Graph records every operation applied to Vars in append order. Parameters
// live outside the graph as Tensors and are bound with Graph::parameter();
// Graph::backward() accumulates d(loss)/d(param) into each bound Tensor's grad
// slot and then clears the tape. Vars from a cleared tape are stale and any
// use raises StateError.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tocomm::ad {

using Shape = std::vector<std::size_t>;

class Tensor {
 public:
  Tensor() = default;
  // Zero-filled tensor.
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor scalar(double value);
  static Tensor full(Shape shape, double value);
  static Tensor from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  // Leading extent; 1 for an empty shape.
  std::size_t rows() const;
  // Product of the trailing extents.
  std::size_t cols() const;
  std::size_t size() const { return data_.size(); }
  bool is_scalar() const { return data_.size() == 1; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols() + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols() + c];
  }
  double item() const;

  bool requires_grad() const { return requires_grad_; }
  void set_requires_grad(bool value) { requires_grad_ = value; }

  bool has_grad() const { return grad_.has_value(); }
  // Throws StateError when no gradient has been populated.
  std::span<const double> grad() const;
  // Allocates a zero gradient on first access.
  std::span<double> mutable_grad();
  void zero_grad();
  void clear_grad() { grad_.reset(); }

  bool all_finite() const;
  bool operator==(const Tensor& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
  std::optional<std::vector<double>> grad_;
  bool requires_grad_ = false;
};

class Graph;

// Handle to a node of a Graph. Cheap to copy; invalid once the graph clears.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  Graph& graph() const;
  std::size_t id() const { return id_; }
  bool requires_grad() const;

 private:
  friend class Graph;
  Var(Graph* graph, std::size_t id, std::uint64_t generation)
      : graph_(graph), id_(id), generation_(generation) {}

  Graph* graph_ = nullptr;
  std::size_t id_ = 0;
  std::uint64_t generation_ = 0;
};

// Gradient buffers of a node's inputs, in input order. An entry is null when
// that input does not take part in differentiation.
using GradBuffers = std::span<std::vector<double>* const>;
using BackwardFn =
    std::function<void(std::span<const double> out_grad, GradBuffers in_grads)>;

class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Leaf that never receives a gradient.
  Var constant(Tensor value);
  // Leaf bound to an externally owned tensor. The tensor must outlive the
  // next backward() or clear(). Its gradient accumulates when
  // param.requires_grad() is set.
  Var parameter(Tensor& param);
  // Appends an operation node. `value` must be finite (NumericError
  // otherwise). `backward` adds the vector-Jacobian product into each
  // non-null input buffer.
  Var record(std::string_view tag, std::vector<Var> inputs, Tensor value,
             BackwardFn backward);

  // Reverse sweep from a scalar loss, then clears the tape.
  void backward(const Var& loss);
  // Reverse sweep seeded with an explicit upstream gradient for `output`
  // (same length as its value), then clears the tape. This is how a
  // gradient received over a link is pushed into a local graph.
  void backward_from(const Var& output, std::span<const double> seed);
  // Drops all nodes without differentiating, e.g. after an evaluation pass.
  void clear();

  std::size_t node_count() const { return nodes_.size(); }
  std::string_view tag(const Var& v) const;

 private:
  friend class Var;
  struct Node {
    std::string_view tag;
    std::vector<std::size_t> inputs;
    Tensor value;
    bool requires_grad = false;
    Tensor* parameter = nullptr;
    BackwardFn backward;
  };

  const Node& node(const Var& v) const;

  // deque keeps references to node values stable while the tape grows.
  std::deque<Node> nodes_;
  std::uint64_t generation_ = 1;
};

// --- Operations -----------------------------------------------------------
//
// All operands are rank-2 [rows x cols]. Elementwise binaries accept equal
// shapes or a scalar on either side. Shape violations raise DimensionError.

Var matmul(const Var& a, const Var& b);
Var transpose(const Var& a);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double factor);
Var add_scalar(const Var& a, double value);
Var neg(const Var& a);
Var relu(const Var& a);
Var exp(const Var& a);
// Raises DomainError on any non-positive entry.
Var log(const Var& a);

Var sum(const Var& a);
Var mean(const Var& a);

// x[m x n] + bias[1 x n] broadcast across rows.
Var add_row(const Var& x, const Var& bias);
// Row-wise log-softmax with max subtraction. With exclude_diagonal the
// entries (i, i) are left out of row i's normalizer; their outputs are 0 and
// carry no gradient. Requires a square input in that mode.
Var log_softmax(const Var& x, bool exclude_diagonal = false);
// Rescales each row to Euclidean norm `norm`. A zero row raises
// DegenerateInputError.
Var row_normalize(const Var& x, double norm);
// Vertical stack [a; b].
Var concat_rows(const Var& a, const Var& b);
// out[i] = x(i, cols[i]), shape [m x 1].
Var select_per_row(const Var& x, std::span<const std::size_t> cols);

inline Var operator+(const Var& a, const Var& b) { return add(a, b); }
inline Var operator-(const Var& a, const Var& b) { return sub(a, b); }
inline Var operator*(const Var& a, const Var& b) { return mul(a, b); }

// --- Optimizer ------------------------------------------------------------

struct SgdConfig {
  double learning_rate = 1e-3;
  // Heavy-ball coefficient in [0, 1); 0 is plain SGD.
  double momentum = 0.0;

  void validate() const;
};

// Stochastic gradient descent with optional momentum:
//   v <- momentum * v + grad;  p <- p - lr * v;  grad <- 0.
// Velocity buffers are matched to parameters by position, so every step()
// must receive the same parameter list.
class Sgd {
 public:
  explicit Sgd(SgdConfig config);

  // Throws StateError if any parameter has no gradient.
  void step(std::span<Tensor* const> params);
  const SgdConfig& config() const { return config_; }

 private:
  SgdConfig config_;
  std::vector<std::vector<double>> velocity_;
};

}  // namespace tocomm::ad

#endif  // TOCOMM_AUTODIFF_H_
