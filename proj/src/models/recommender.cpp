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

#include "revexp/models/recommender.hpp"

#include <cmath>

#include "revexp/corpus/vocab.hpp"
#include "revexp/error.hpp"

namespace revexp::models {

std::vector<double> ExplainableRecommender::log_likelihoods(
    const Context& ctx, std::span<const corpus::Tokens> texts) const {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(log_likelihood(ctx, t));
  return out;
}

std::size_t scored_positions(std::span<const std::string> words) { return words.size() + 1; }

namespace {

void check_text(std::span<const std::string> words) {
  if (words.empty()) throw Error("perplexity of empty text");
}

double to_perplexity(double ll, std::span<const std::string> words) {
  return std::exp(-ll / static_cast<double>(scored_positions(words)));
}

}  // namespace

double perplexity(const ExplainableRecommender& model, const Context& ctx,
                  std::span<const std::string> words) {
  check_text(words);
  return to_perplexity(model.log_likelihood(ctx, words), words);
}

std::vector<double> perplexities(const ExplainableRecommender& model, const Context& ctx,
                                 std::span<const corpus::Tokens> texts) {
  for (const auto& t : texts) check_text(t);
  std::vector<double> ll = model.log_likelihoods(ctx, texts);
  for (std::size_t i = 0; i < ll.size(); ++i) ll[i] = to_perplexity(ll[i], texts[i]);
  return ll;
}

std::span<const std::string> strip_eos(std::span<const std::string> tokens) {
  if (!tokens.empty() && tokens.back() == corpus::Vocab::kEosToken) {
    return tokens.first(tokens.size() - 1);
  }
  return tokens;
}

}  // namespace revexp::models
