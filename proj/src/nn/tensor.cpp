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

#include "revexp/nn/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <utility>

#include "revexp/error.hpp"

namespace revexp::nn {
namespace {

std::size_t extent_product(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw Error("tensor shape must have at least one extent");
  for (const std::size_t e : shape) {
    if (e == 0) throw Error("tensor extents must be positive");
  }
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), values_(extent_product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (extent_product(shape_) != values_.size()) {
    throw Error("tensor value count " + std::to_string(values_.size()) +
                " does not match shape " + shape_string());
  }
}

std::size_t Tensor::rows() const {
  if (shape_.size() <= 1) return shape_.empty() ? 0 : 1;
  return values_.size() / shape_.back();
}

std::size_t Tensor::cols() const { return shape_.empty() ? 0 : shape_.back(); }

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

bool Tensor::all_finite() const {
  for (const double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

}  // namespace revexp::nn
