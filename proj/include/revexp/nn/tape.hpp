// Copyright 2026 The revexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "revexp/nn/param_store.hpp"
#include "revexp/nn/tensor.hpp"

namespace revexp::nn {

// The fixed primitive set. Every layer is composed from these.
enum class OpKind {
  kConstant,
  kParameter,
  kMatMul,
  kGather,
  kElementwise,
  kAttention,
  kRecurrentCell,
  kLayerNorm,
  kSoftmaxCrossEntropy,
  kSquaredError,
};

std::string_view op_name(OpKind kind);

class Tape;

// Handle to a node on a tape. Cheap to copy; only valid while the tape lives.
class Var {
 public:
  Var() = default;
  bool valid() const { return tape_ != nullptr; }
  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  const Tensor& value() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Records a forward pass in creation order, which is a topological order, so
// backward is a single reverse sweep. A tape built with record_gradients=false
// keeps no closures and only evaluates values; it never touches the parameter
// store, which makes it safe for concurrent read-only evaluation.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  explicit Tape(bool record_gradients = true) : record_(record_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  // Gradients flow into store[id].grad on backward.
  Var param(ParamStore& store, ParamId id);
  // Read-only binding; the node never receives a gradient.
  Var param(const ParamStore& store, ParamId id);

  const Tensor& value(std::size_t id) const;
  const Tensor& value(Var v) const { return value(v.id()); }
  // Gradient of the last backward pass; zero-sized if the node was not reached.
  const Tensor& grad(Var v) const;
  OpKind kind(std::size_t id) const { return nodes_.at(id).kind; }
  std::size_t size() const { return nodes_.size(); }
  bool records_gradients() const { return record_; }

  // Reverse sweep from a scalar node. Each node is visited once. Fails when
  // called on a tape with no forward pass, on a non-scalar node, or twice.
  void backward(Var loss);

  bool all_finite() const;

  // Used by primitives.
  Var push(OpKind kind, Tensor value, std::vector<std::size_t> inputs, BackwardFn fn);
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Gradient buffer of an input node, allocated on first use.
  Tensor& grad_buffer(std::size_t id);
  const Tensor& output_grad(std::size_t id) const { return nodes_[id].grad; }
  void check_owner(Var v) const;

 private:
  struct Node {
    OpKind kind = OpKind::kConstant;
    Tensor owned;
    const Tensor* external = nullptr;
    Tensor grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  bool record_;
  bool backward_done_ = false;
  std::vector<Node> nodes_;
};

}  // namespace revexp::nn
