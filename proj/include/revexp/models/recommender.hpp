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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revexp/corpus/text.hpp"

namespace revexp::models {

// Conditioning for a single explanation.
struct Context {
  int user = 0;
  int item = 0;
  // Aspect term; only read by conditioned models.
  std::optional<std::string> aspect;
};

struct DecodeOptions {
  std::size_t max_len = 16;
  // Greedy unless set. Metrics never sample.
  bool sample = false;
  std::uint64_t seed = 0;
};

class ExplainableRecommender {
 public:
  virtual ~ExplainableRecommender() = default;

  virtual std::string kind() const = 0;
  // Upper-bound baselines with access to information a deployed model lacks.
  virtual bool privileged() const { return false; }

  // In [1, 5].
  virtual double predict_rating(int user, int item) const = 0;

  // Output ends with "<eos>" and has at most options.max_len tokens.
  virtual corpus::Tokens generate(const Context& ctx, const DecodeOptions& options) const = 0;

  // Sum of per-token log-probabilities of words followed by EOS. `words`
  // must not contain the EOS token.
  virtual double log_likelihood(const Context& ctx, std::span<const std::string> words) const = 0;

  // Scores several texts under one context; overridden by batched models.
  virtual std::vector<double> log_likelihoods(const Context& ctx,
                                              std::span<const corpus::Tokens> texts) const;
};

// Scored positions of a text: its words plus EOS.
std::size_t scored_positions(std::span<const std::string> words);

double perplexity(const ExplainableRecommender& model, const Context& ctx,
                  std::span<const std::string> words);
std::vector<double> perplexities(const ExplainableRecommender& model, const Context& ctx,
                                 std::span<const corpus::Tokens> texts);

// Drops a trailing "<eos>" if present.
std::span<const std::string> strip_eos(std::span<const std::string> tokens);

}  // namespace revexp::models
