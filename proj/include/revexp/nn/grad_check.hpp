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
#include <string>

#include "revexp/nn/param_store.hpp"
#include "revexp/nn/tape.hpp"

namespace revexp::nn {

// Builds a scalar loss on the given tape from the store's parameters.
using LossFn = std::function<Var(Tape&, ParamStore&)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  std::size_t coordinates = 0;
};

// Compares autodiff gradients against central differences
// (f(x+eps) - f(x-eps)) / 2eps for every coordinate of every parameter. The
// relative error denominator is max(|analytic|, |numeric|, 1e-8). Requires
// eps in [1e-6, 1e-3] and a deterministic loss_fn.
GradCheckResult grad_check(const LossFn& loss_fn, ParamStore& params, double eps = 1e-5);

}  // namespace revexp::nn
