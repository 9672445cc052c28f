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
#include <unordered_map>
#include <vector>

#include "revexp/corpus/review.hpp"
#include "revexp/corpus/vocab.hpp"
#include "revexp/models/recommender.hpp"

namespace revexp::models {

// Context-free add-one unigram model over vocabulary words and EOS.
class UnigramModel final : public ExplainableRecommender {
 public:
  UnigramModel(const corpus::Vocab& vocab, std::span<const corpus::Review> train);

  std::string kind() const override { return "unigram"; }
  double predict_rating(int, int) const override { return mean_rating_; }
  corpus::Tokens generate(const Context& ctx, const DecodeOptions& options) const override;
  double log_likelihood(const Context& ctx, std::span<const std::string> words) const override;

  double probability(std::string_view token) const;

 private:
  corpus::Vocab vocab_;
  std::vector<double> counts_;
  double total_ = 0.0;
  double mean_rating_ = 3.0;
};

// exp of the mean per-position nll over a review list. Conditioned models
// receive each review's aspect.
double corpus_perplexity(const ExplainableRecommender& model,
                         std::span<const corpus::Review> reviews);

double mean_rating(std::span<const corpus::Review> reviews);
// RMSE of a constant prediction.
double constant_rmse(double prediction, std::span<const corpus::Review> reviews);
double model_rmse(const ExplainableRecommender& model, std::span<const corpus::Review> reviews);

}  // namespace revexp::models
