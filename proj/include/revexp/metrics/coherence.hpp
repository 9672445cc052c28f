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

#include <span>
#include <string>
#include <vector>

#include "revexp/corpus/lexicon.hpp"
#include "revexp/corpus/review.hpp"
#include "revexp/corpus/vocab.hpp"
#include "revexp/metrics/result.hpp"
#include "revexp/models/generation.hpp"
#include "revexp/models/recommender.hpp"
#include "revexp/nn/tensor.hpp"

namespace revexp::metrics {

struct MatchScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Harmonic mean when both are positive, 0 when they cancel, otherwise the
// smaller of the two.
double match_f1(double precision, double recall);

// Greedy cosine matching over rows of `embeddings` indexed through `vocab`.
MatchScore greedy_match_f1(std::span<const std::string> generated,
                           std::span<const std::string> reference, const corpus::Vocab& vocab,
                           const nn::Tensor& embeddings);

// Add-k bigram model over vocabulary ids; contexts include BOS, targets EOS.
class BigramLM {
 public:
  BigramLM(const corpus::Vocab& vocab, std::span<const corpus::Review> train, double k = 0.1);
  double probability(int context, int next) const;
  const corpus::Vocab& vocab() const { return vocab_; }

 private:
  corpus::Vocab vocab_;
  double k_;
  std::size_t targets_;
  std::vector<std::vector<double>> counts_;
  std::vector<double> totals_;
};

// Mean per-position nll of `generated` (EOS included). Where the context
// word occurs in `reference`, the corpus model is mixed with the reference's
// own bigram distribution at weight `lambda`.
double cond_nll_score(std::span<const std::string> generated,
                      std::span<const std::string> reference, const BigramLM& lm,
                      double lambda = 0.5);

bool entail_proxy(std::span<const std::string> generated, std::span<const std::string> reference,
                  const corpus::Lexicon& lexicon);

double rmse(std::span<const double> predicted, std::span<const double> gold);

// Aggregates over explanations aligned with their reference reviews. Empty
// generations are excluded and counted.
MetricResult entail_metric(std::span<const models::Generation> generations,
                           std::span<const corpus::Review> references,
                           const corpus::Lexicon& lexicon, bool audit = false);
MetricResult greedy_match_metric(std::span<const models::Generation> generations,
                                 std::span<const corpus::Review> references,
                                 const corpus::Vocab& vocab, const nn::Tensor& embeddings,
                                 Execution execution = Execution::kParallel, bool audit = false);
MetricResult cond_nll_metric(std::span<const models::Generation> generations,
                             std::span<const corpus::Review> references, const BigramLM& lm,
                             double lambda, Execution execution = Execution::kParallel,
                             bool audit = false);
MetricResult rmse_metric(const models::ExplainableRecommender& model,
                         std::span<const corpus::Review> reviews,
                         Execution execution = Execution::kParallel, bool audit = false);

}  // namespace revexp::metrics
