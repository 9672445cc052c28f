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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "revexp/harness/config.hpp"
#include "revexp/metrics/result.hpp"

namespace revexp::harness {

struct ReportRow {
  std::string model;
  std::string type;
  bool privileged = false;
  std::vector<metrics::MetricResult> metrics;

  const metrics::MetricResult* find(std::string_view metric) const;
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct EvaluationReport {
  std::string config_hash;
  std::string corpus_hash;
  std::string corpus_fingerprint;
  Seeds seeds;
  std::size_t k = 0;
  std::size_t n_explanations = 0;
  // Validation MSE of the text-only regressor behind TLAE and GreedyF1.
  double calibration_mse = 0.0;
  std::vector<std::string> notes;
  std::vector<ReportRow> rows;

  friend bool operator==(const EvaluationReport& a, const EvaluationReport& b) {
    return a.config_hash == b.config_hash && a.corpus_hash == b.corpus_hash &&
           a.corpus_fingerprint == b.corpus_fingerprint && a.seeds.corpus == b.seeds.corpus &&
           a.seeds.model == b.seeds.model && a.seeds.eval == b.seeds.eval && a.k == b.k &&
           a.n_explanations == b.n_explanations && a.calibration_mse == b.calibration_mse &&
           a.notes == b.notes && a.rows == b.rows;
  }
};

// Display order of metric columns.
const std::vector<std::string>& column_order();

std::string metric_to_json(const metrics::MetricResult& m);
metrics::MetricResult metric_from_json(std::string_view text);

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view text);

// Markdown table. The best value of each column among non-privileged rows is
// bold; privileged rows carry a dagger; exclusions become footnotes.
std::string report_to_table(const EvaluationReport& report);

enum class ReportFormat { kMachine, kHuman };
void emit_report(const EvaluationReport& report, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace revexp::harness
