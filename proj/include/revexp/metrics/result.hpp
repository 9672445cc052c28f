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
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace revexp::metrics {

enum class Direction { kHigherBetter, kLowerBetter };

std::string_view direction_arrow(Direction d);

struct MetricResult {
  std::string name;
  double value = 0.0;
  std::size_t samples = 0;
  // Attempted but not scored (unperturbable text, empty generation, ...).
  std::size_t excluded = 0;
  Direction direction = Direction::kHigherBetter;
  // Settings that produced the value, as "key=value" pairs.
  std::string config;
  // Per-instance lines, filled only when auditing.
  std::vector<std::string> audit;

  friend bool operator==(const MetricResult&, const MetricResult&) = default;
};

enum class Execution { kSerial, kParallel };

// Runs fn(i) for i in [0, n). The parallel path distributes instances over
// OpenMP threads; callers write results into per-instance slots so the
// reduction stays in index order either way.
template <typename Fn>
void for_each_instance(std::size_t n, Execution execution, Fn&& fn) {
  if (execution == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// %.17g formatting for audit lines.
std::string exact(double v);

}  // namespace revexp::metrics
