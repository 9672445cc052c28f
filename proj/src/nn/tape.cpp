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

#include "revexp/nn/tape.hpp"

#include <utility>

#include "revexp/error.hpp"

namespace revexp::nn {

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kConstant: return "constant";
    case OpKind::kParameter: return "parameter";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kGather: return "gather";
    case OpKind::kElementwise: return "elementwise";
    case OpKind::kAttention: return "attention";
    case OpKind::kRecurrentCell: return "recurrent_cell";
    case OpKind::kLayerNorm: return "layer_norm";
    case OpKind::kSoftmaxCrossEntropy: return "softmax_cross_entropy";
    case OpKind::kSquaredError: return "squared_error";
  }
  return "unknown";
}

const Tensor& Var::value() const {
  if (!tape_) throw Error("use of an unbound tape variable");
  return tape_->value(id_);
}

Var Tape::constant(Tensor value) {
  Node n;
  n.kind = OpKind::kConstant;
  n.owned = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(ParamStore& store, ParamId id) {
  Node n;
  n.kind = OpKind::kParameter;
  n.external = &store[id].value;
  if (record_) {
    n.param = &store[id];
    n.requires_grad = true;
  }
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(const ParamStore& store, ParamId id) {
  Node n;
  n.kind = OpKind::kParameter;
  n.external = &store[id].value;
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::value(std::size_t id) const {
  const Node& n = nodes_.at(id);
  return n.external ? *n.external : n.owned;
}

const Tensor& Tape::grad(Var v) const {
  check_owner(v);
  return nodes_[v.id()].grad;
}

void Tape::check_owner(Var v) const {
  if (v.tape() != this || v.id() >= nodes_.size()) {
    throw Error("variable does not belong to this tape");
  }
}

Var Tape::push(OpKind kind, Tensor value, std::vector<std::size_t> inputs, BackwardFn fn) {
  Node n;
  n.kind = kind;
  n.owned = std::move(value);
  if (record_) {
    for (const std::size_t in : inputs) n.requires_grad = n.requires_grad || nodes_[in].requires_grad;
    if (n.requires_grad) n.backward = std::move(fn);
  }
  n.inputs = std::move(inputs);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Tensor& Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor(value(id).shape());
  return n.grad;
}

void Tape::backward(Var loss) {
  if (!loss.valid() || nodes_.empty()) throw Error("backward called before any forward pass");
  check_owner(loss);
  if (!record_) throw Error("backward on a tape that does not record gradients");
  if (backward_done_) throw Error("backward already ran on this tape");
  if (value(loss.id()).size() != 1) throw Error("backward requires a scalar loss node");
  backward_done_ = true;

  grad_buffer(loss.id())[0] = 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.param) {
      auto dst = n.param->grad.values();
      const auto src = n.grad.values();
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    } else if (n.backward) {
      n.backward(*this, i);
    }
  }
}

bool Tape::all_finite() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!value(i).all_finite()) return false;
    if (!nodes_[i].grad.empty() && !nodes_[i].grad.all_finite()) return false;
  }
  return true;
}

}  // namespace revexp::nn
