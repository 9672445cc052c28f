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

#include "revexp/nn/optim.hpp"

#include <cmath>

#include "revexp/error.hpp"

namespace revexp::nn {

void adam_step(ParamStore& params, const AdamConfig& config) {
  if (config.learning_rate <= 0 || config.beta1 <= 0 || config.beta2 <= 0 || config.eps <= 0) {
    throw Error("adam hyperparameters must be positive");
  }
  for (const Parameter& p : params) {
    if (!p.grad.same_shape(p.value)) {
      throw Error("gradient shape " + p.grad.shape_string() + " does not match parameter '" +
                  p.name + "' " + p.value.shape_string());
    }
  }
  params.increment_step();
  const double t = static_cast<double>(params.step());
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (Parameter& p : params) {
    auto theta = p.value.values();
    const auto g = p.grad.values();
    auto m = p.first_moment.values();
    auto v = p.second_moment.values();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      theta[i] -= config.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + config.eps);
    }
  }
}

}  // namespace revexp::nn
