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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "revexp/corpus/corpus.hpp"
#include "revexp/models/recommender.hpp"

namespace revexp::models {

// Reads the generator directly: emits the gold review and scores it as
// near-certain.
class OracleModel final : public ExplainableRecommender {
 public:
  // Probability mass on the gold continuation while the prefix matches.
  static constexpr double kConfidence = 1.0 - 1e-3;

  OracleModel(std::shared_ptr<const corpus::GroundTruth> truth, std::size_t vocab_size);

  std::string kind() const override { return "oracle"; }
  bool privileged() const override { return true; }
  double predict_rating(int user, int item) const override;
  corpus::Tokens generate(const Context& ctx, const DecodeOptions& options) const override;
  double log_likelihood(const Context& ctx, std::span<const std::string> words) const override;

  // Gold words for (user, item), EOS excluded.
  corpus::Tokens gold(int user, int item) const;

 private:
  std::shared_ptr<const corpus::GroundTruth> truth_;
  std::size_t vocab_size_;
};

// Stateless hash of (seed, user, item, text): equal queries always agree and
// distinct texts get independent uniform draws.
class RandomScorer final : public ExplainableRecommender {
 public:
  explicit RandomScorer(std::uint64_t seed, std::vector<std::string> words = {});

  std::string kind() const override { return "random"; }
  double predict_rating(int user, int item) const override;
  corpus::Tokens generate(const Context& ctx, const DecodeOptions& options) const override;
  double log_likelihood(const Context& ctx, std::span<const std::string> words) const override;

  // Per-position negative log-likelihood in [0, kMaxNats).
  double draw(int user, int item, std::span<const std::string> words) const;
  static constexpr double kMaxNats = 5.0;

 private:
  std::uint64_t seed_;
  std::vector<std::string> words_;
};

// Every position gets probability 1/V.
class UniformScorer final : public ExplainableRecommender {
 public:
  explicit UniformScorer(std::size_t vocab_size);

  std::string kind() const override { return "uniform"; }
  double predict_rating(int, int) const override { return 3.0; }
  corpus::Tokens generate(const Context& ctx, const DecodeOptions& options) const override;
  double log_likelihood(const Context& ctx, std::span<const std::string> words) const override;

 private:
  std::size_t vocab_size_;
};

}  // namespace revexp::models
