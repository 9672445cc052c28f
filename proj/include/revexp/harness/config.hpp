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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revexp/corpus/corpus.hpp"
#include "revexp/metrics/aux_regressor.hpp"
#include "revexp/models/neural.hpp"
#include "revexp/models/train.hpp"

namespace revexp::harness {

struct CorpusSpec {
  int users = 200;
  int items = 100;
  int aspects = 8;
  int reviews_per_user = 40;
  corpus::SplitRatios ratios;
  // Lexicon file; the built-in lexicon when empty.
  std::string lexicon;
  // External corpus file; replaces the synthetic generator when set.
  std::string path;
};

enum class ModelType { kRecurrent, kTransformer, kOracle, kRandom };

std::string_view model_type_name(ModelType t);
ModelType parse_model_type(std::string_view name);

struct ModelEntry {
  std::string name;
  ModelType type = ModelType::kTransformer;
  models::ModelConfig model;
  models::TrainConfig train;
  bool neural() const { return type == ModelType::kRecurrent || type == ModelType::kTransformer; }
};

enum class AirMode { kGroundTruth, kGenerated, kBoth };
enum class TlaeMode { kModelRating, kGoldRating, kBoth };

std::string_view air_mode_name(AirMode m);
AirMode parse_air_mode(std::string_view name);
std::string_view tlae_mode_name(TlaeMode m);
TlaeMode parse_tlae_mode(std::string_view name);

// Metric identifiers accepted by the metrics list.
const std::vector<std::string>& all_metric_names();

struct MetricSettings {
  std::size_t k = 100;
  std::size_t n_explanations = 10000;
  AirMode air_mode = AirMode::kGroundTruth;
  TlaeMode tlae_mode = TlaeMode::kBoth;
  double cond_nll_lambda = 0.5;
  std::size_t max_len = 16;
  std::vector<std::string> enabled = all_metric_names();
  metrics::AuxConfig aux;

  bool has(std::string_view metric) const;
};

struct Seeds {
  std::uint64_t corpus = 1;
  std::uint64_t model = 2;
  std::uint64_t eval = 3;
};

struct RunConfig {
  CorpusSpec corpus;
  std::vector<ModelEntry> models;
  MetricSettings metrics;
  Seeds seeds;
  std::string out;
  bool audit = false;

  void validate() const;
  const ModelEntry& model(std::string_view name) const;
  // Keeps only the named roster entries, in the given order.
  void select_models(const std::vector<std::string>& names);

  // Canonical text of each part; hashes are FNV-1a over these.
  std::string canonical_corpus() const;
  std::string canonical_model(const ModelEntry& entry) const;
  std::string canonical_eval() const;

  std::uint64_t corpus_hash() const;
  std::uint64_t model_hash(const ModelEntry& entry) const;
  std::uint64_t aux_hash() const;
  std::uint64_t generation_hash(const ModelEntry& entry) const;
  // Covers everything that influences the report.
  std::uint64_t hash() const;
};

RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

std::string hex64(std::uint64_t v);

}  // namespace revexp::harness
