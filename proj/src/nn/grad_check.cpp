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

#include "revexp/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "revexp/error.hpp"

namespace revexp::nn {
namespace {

double evaluate(const LossFn& fn, ParamStore& params) {
  Tape tape(false);
  const Var loss = fn(tape, params);
  if (loss.value().size() != 1) throw Error("grad_check loss must be scalar");
  return loss.value()[0];
}

}  // namespace

GradCheckResult grad_check(const LossFn& loss_fn, ParamStore& params, double eps) {
  if (!(eps >= 1e-6 && eps <= 1e-3)) throw Error("grad_check epsilon must lie in [1e-6, 1e-3]");
  const double first = evaluate(loss_fn, params);
  const double second = evaluate(loss_fn, params);
  if (first != second) throw Error("grad_check loss function is not deterministic");

  params.zero_grad();
  {
    Tape tape;
    tape.backward(loss_fn(tape, params));
  }
  std::vector<Tensor> analytic;
  for (const Parameter& p : params) analytic.push_back(p.grad);

  GradCheckResult result;
  for (std::size_t pid = 0; pid < params.size(); ++pid) {
    auto values = params[pid].value.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double up = evaluate(loss_fn, params);
      values[i] = saved - eps;
      const double down = evaluate(loss_fn, params);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[pid][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      const double rel = std::abs(a - numeric) / denom;
      ++result.coordinates;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_parameter = params[pid].name;
        result.worst_index = i;
      }
    }
  }
  return result;
}

}  // namespace revexp::nn
