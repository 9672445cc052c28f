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
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "revexp/nn/tensor.hpp"
#include "revexp/rng.hpp"

namespace revexp::nn {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor first_moment;
  Tensor second_moment;
};

using ParamId = std::size_t;

enum class Init { kUniform, kZeros, kOnes };

// Named parameters plus optimizer state. Ids are dense indices in insertion
// order and stay valid for the lifetime of the store (and its copies).
class ParamStore {
 public:
  // Weights default to uniform(-0.08, 0.08).
  ParamId add(std::string name, std::vector<std::size_t> shape, Init init, Rng& rng,
              double scale = 0.08);
  ParamId add(std::string name, Tensor value);

  Parameter& operator[](ParamId id) { return params_.at(id); }
  const Parameter& operator[](ParamId id) const { return params_.at(id); }
  ParamId id(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();
  double grad_norm() const;
  // Rescales all gradients so their global L2 norm is at most max_norm.
  // Returns the norm before clipping.
  double clip_grad_norm(double max_norm);

  std::int64_t step() const { return step_; }
  void set_step(std::int64_t step);
  void increment_step() { ++step_; }

  std::vector<Tensor> snapshot() const;
  void restore(const std::vector<Tensor>& values);

  // Equal names, shapes, values and step counter.
  bool same_values(const ParamStore& other) const;

 private:
  std::vector<Parameter> params_;
  std::unordered_map<std::string, ParamId> index_;
  std::int64_t step_ = 0;
};

}  // namespace revexp::nn
