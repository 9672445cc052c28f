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

#include "revexp/models/baselines.hpp"

#include <cmath>

#include "revexp/error.hpp"

namespace revexp::models {

UnigramModel::UnigramModel(const corpus::Vocab& vocab, std::span<const corpus::Review> train)
    : vocab_(vocab), counts_(vocab.size(), 0.0) {
  if (train.empty()) throw Error("unigram model needs training reviews");
  // Add-one over every scorable id: EOS and ordinary words.
  for (std::size_t id = 0; id < counts_.size(); ++id) {
    if (id == corpus::Vocab::kEos || id >= corpus::Vocab::kReserved) counts_[id] = 1.0;
  }
  double rating_sum = 0.0;
  for (const auto& r : train) {
    for (const int id : vocab.encode(r.tokens, true)) counts_[static_cast<std::size_t>(id)] += 1.0;
    rating_sum += r.rating;
  }
  for (const double c : counts_) total_ += c;
  mean_rating_ = rating_sum / static_cast<double>(train.size());
}

double UnigramModel::probability(std::string_view token) const {
  return counts_[static_cast<std::size_t>(vocab_.id(token))] / total_;
}

corpus::Tokens UnigramModel::generate(const Context&, const DecodeOptions&) const {
  throw Error("unigram model does not generate text");
}

double UnigramModel::log_likelihood(const Context&, std::span<const std::string> words) const {
  double ll = std::log(probability(corpus::Vocab::kEosToken));
  for (const auto& w : words) ll += std::log(probability(w));
  return ll;
}

double corpus_perplexity(const ExplainableRecommender& model,
                         std::span<const corpus::Review> reviews) {
  if (reviews.empty()) throw Error("perplexity of an empty review list");
  double nll = 0.0, positions = 0.0;
  for (const auto& r : reviews) {
    const Context ctx{r.user, r.item, r.aspect};
    nll -= model.log_likelihood(ctx, r.tokens);
    positions += static_cast<double>(scored_positions(r.tokens));
  }
  return std::exp(nll / positions);
}

double mean_rating(std::span<const corpus::Review> reviews) {
  if (reviews.empty()) throw Error("mean rating of an empty review list");
  double s = 0.0;
  for (const auto& r : reviews) s += r.rating;
  return s / static_cast<double>(reviews.size());
}

double constant_rmse(double prediction, std::span<const corpus::Review> reviews) {
  if (reviews.empty()) throw Error("rmse of an empty review list");
  double s = 0.0;
  for (const auto& r : reviews) s += (prediction - r.rating) * (prediction - r.rating);
  return std::sqrt(s / static_cast<double>(reviews.size()));
}

double model_rmse(const ExplainableRecommender& model, std::span<const corpus::Review> reviews) {
  if (reviews.empty()) throw Error("rmse of an empty review list");
  double s = 0.0;
  for (const auto& r : reviews) {
    const double d = model.predict_rating(r.user, r.item) - r.rating;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(reviews.size()));
}

}  // namespace revexp::models
