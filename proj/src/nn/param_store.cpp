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

#include "revexp/nn/param_store.hpp"

#include <cmath>
#include <utility>

#include "revexp/error.hpp"

namespace revexp::nn {

ParamId ParamStore::add(std::string name, std::vector<std::size_t> shape, Init init,
                        Rng& rng, double scale) {
  Tensor value(std::move(shape));
  switch (init) {
    case Init::kUniform:
      for (double& v : value.values()) v = rng.uniform(-scale, scale);
      break;
    case Init::kZeros:
      break;
    case Init::kOnes:
      value.fill(1.0);
      break;
  }
  return add(std::move(name), std::move(value));
}

ParamId ParamStore::add(std::string name, Tensor value) {
  if (index_.contains(name)) throw Error("duplicate parameter name '" + name + "'");
  const ParamId id = params_.size();
  index_.emplace(name, id);
  Parameter p;
  p.name = std::move(name);
  p.grad = Tensor(value.shape());
  p.first_moment = Tensor(value.shape());
  p.second_moment = Tensor(value.shape());
  p.value = std::move(value);
  params_.push_back(std::move(p));
  return id;
}

ParamId ParamStore::id(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) throw Error("unknown parameter '" + std::string(name) + "'");
  return it->second;
}

bool ParamStore::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

void ParamStore::zero_grad() {
  for (auto& p : params_) p.grad.fill(0.0);
}

double ParamStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& p : params_) {
    for (const double g : p.grad.values()) sq += g * g;
  }
  return std::sqrt(sq);
}

double ParamStore::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (norm > max_norm && norm > 0.0) {
    const double factor = max_norm / norm;
    for (auto& p : params_) {
      for (double& g : p.grad.values()) g *= factor;
    }
  }
  return norm;
}

void ParamStore::set_step(std::int64_t step) {
  if (step < step_ || step < 0) throw Error("step counter must be monotone and non-negative");
  step_ = step;
}

std::vector<Tensor> ParamStore::snapshot() const {
  std::vector<Tensor> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.value);
  return out;
}

void ParamStore::restore(const std::vector<Tensor>& values) {
  if (values.size() != params_.size()) throw Error("snapshot does not match parameter set");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].same_shape(params_[i].value)) {
      throw Error("snapshot shape mismatch for '" + params_[i].name + "'");
    }
    params_[i].value = values[i];
  }
}

bool ParamStore::same_values(const ParamStore& other) const {
  if (params_.size() != other.params_.size() || step_ != other.step_) return false;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name != other.params_[i].name) return false;
    if (params_[i].value != other.params_[i].value) return false;
  }
  return true;
}

}  // namespace revexp::nn
