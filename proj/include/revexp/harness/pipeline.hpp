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
#include <memory>
#include <ostream>
#include <string>

#include "revexp/corpus/corpus.hpp"
#include "revexp/corpus/lexicon.hpp"
#include "revexp/harness/config.hpp"
#include "revexp/harness/report.hpp"
#include "revexp/metrics/result.hpp"
#include "revexp/models/recommender.hpp"

namespace revexp::harness {

// Artifact layout of one run directory.
struct RunPaths {
  std::filesystem::path root;

  std::filesystem::path corpus() const { return root / "corpus.tsv"; }
  std::filesystem::path corpus_meta() const { return root / "corpus.meta"; }
  std::filesystem::path world() const { return root / "world.txt"; }
  std::filesystem::path lexicon() const { return root / "lexicon.txt"; }
  std::filesystem::path checkpoint(const std::string& model) const {
    return root / "checkpoints" / (model + ".ckpt");
  }
  std::filesystem::path train_log(const std::string& model) const {
    return root / "checkpoints" / (model + ".log");
  }
  std::filesystem::path aux_checkpoint() const { return root / "checkpoints" / "aux_regressor.ckpt"; }
  std::filesystem::path generations(const std::string& model) const {
    return root / "generations" / (model + ".tsv");
  }
  std::filesystem::path generations_meta(const std::string& model) const {
    return root / "generations" / (model + ".meta");
  }
  std::filesystem::path results(const std::string& model) const {
    return root / "results" / (model + ".json");
  }
  std::filesystem::path audit(const std::string& model, const std::string& metric) const;
  std::filesystem::path report_json() const { return root / "report.json"; }
  std::filesystem::path report_text() const { return root / "report.txt"; }
  std::filesystem::path timing() const { return root / "timing.txt"; }
};

struct PipelineOptions {
  // Corpus artifacts are read from here; defaults to the run directory.
  std::filesystem::path corpus_dir;
  metrics::Execution execution = metrics::Execution::kParallel;
  std::ostream* log = nullptr;
};

struct CorpusArtifacts {
  corpus::Corpus corpus;
  corpus::Lexicon lexicon;
};

// Individual stages. Each reads what earlier stages persisted and aborts on
// a missing artifact or a config hash mismatch; errors carry the stage name.
void gen_corpus_stage(const RunConfig& config, const RunPaths& out, const PipelineOptions& opt);
void train_stage(const RunConfig& config, const RunPaths& out, const PipelineOptions& opt);
void generate_stage(const RunConfig& config, const RunPaths& out, const PipelineOptions& opt);
void evaluate_stage(const RunConfig& config, const RunPaths& out, const PipelineOptions& opt);
EvaluationReport report_stage(const RunConfig& config, const RunPaths& out,
                              const PipelineOptions& opt);

// All five stages in order. Stage wall times go to timing.txt, never into
// the report.
EvaluationReport run_pipeline(const RunConfig& config, const RunPaths& out,
                              const PipelineOptions& opt = {});

CorpusArtifacts load_corpus_artifacts(const RunConfig& config, const std::filesystem::path& dir);
std::unique_ptr<models::ExplainableRecommender> load_roster_model(const RunConfig& config,
                                                                  const ModelEntry& entry,
                                                                  const CorpusArtifacts& corpus,
                                                                  const RunPaths& out);

// Reviews scored per model: the test split clamped to N.
std::size_t explanation_count(const RunConfig& config, const corpus::Corpus& corpus);

}  // namespace revexp::harness
