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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revexp/corpus/corpus.hpp"
#include "revexp/corpus/vocab.hpp"
#include "revexp/models/recommender.hpp"
#include "revexp/nn/param_store.hpp"
#include "revexp/nn/tape.hpp"
#include "revexp/rng.hpp"

namespace revexp::models {

enum class Architecture { kRecurrent, kTransformer };

std::string_view architecture_name(Architecture a);
Architecture parse_architecture(std::string_view name);

struct ModelConfig {
  Architecture architecture = Architecture::kTransformer;
  // Feeds the gold aspect term to the model (transformer only).
  bool conditioned = false;
  std::size_t embedding = 64;
  std::size_t hidden = 128;
  std::size_t layers = 2;
  std::size_t heads = 4;
  // Longest scorable text in words, EOS excluded.
  std::size_t max_text_len = 32;

  void validate() const;
  std::string describe() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Everything a model needs to know about the corpus it is trained on.
struct ModelDomain {
  corpus::Vocab vocab;
  int num_users = 0;
  int num_items = 0;
  std::vector<bool> seen_users;
  std::vector<bool> seen_items;
  // Initial rating head bias.
  double rating_prior = 3.0;

  static ModelDomain from_corpus(const corpus::Corpus& corpus);
  friend bool operator==(const ModelDomain&, const ModelDomain&) = default;
};

// A review encoded as vocabulary ids.
struct Example {
  int user = 0;
  int item = 0;
  // Aspect word id for conditioned models, -1 otherwise.
  int aspect = -1;
  std::vector<int> words;
  double rating = 0.0;
};

// Logit rows of a batch, one per scored position, grouped by example.
struct ForwardOutput {
  nn::Var logits;
  std::vector<int> targets;
  // Example b owns logit rows [offsets[b], offsets[b + 1]).
  std::vector<std::size_t> offsets;
  // Raw rating head output, one row per example.
  nn::Var rating;
};

// Binds parameters to a tape, either gradient-carrying or read-only.
class ParamBinder {
 public:
  ParamBinder(nn::Tape& tape, nn::ParamStore& store);
  ParamBinder(nn::Tape& tape, const nn::ParamStore& store);

  nn::Var operator()(nn::ParamId id);
  nn::Tape& tape() { return tape_; }

 private:
  nn::Tape& tape_;
  nn::ParamStore* mutable_store_ = nullptr;
  const nn::ParamStore* store_ = nullptr;
  std::vector<nn::Var> bound_;
};

struct LossParts {
  double total = 0.0;
  double nll = 0.0;
  double mse = 0.0;
};

// nll(text) + lambda * mse(rating). Fills `parts` when given.
nn::Var joint_loss(nn::Var logits, std::span<const int> targets, nn::Var rating,
                   std::span<const double> gold_ratings, double lambda,
                   LossParts* parts = nullptr);

class NeuralRecommender : public ExplainableRecommender {
 public:
  ~NeuralRecommender() override = default;

  static std::unique_ptr<NeuralRecommender> create(const ModelConfig& config, ModelDomain domain,
                                                   std::uint64_t seed);

  std::string kind() const override;
  bool privileged() const override { return config_.conditioned; }
  double predict_rating(int user, int item) const override;
  corpus::Tokens generate(const Context& ctx, const DecodeOptions& options) const override;
  double log_likelihood(const Context& ctx, std::span<const std::string> words) const override;
  std::vector<double> log_likelihoods(const Context& ctx,
                                      std::span<const corpus::Tokens> texts) const override;

  const ModelConfig& config() const { return config_; }
  const ModelDomain& domain() const { return domain_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  Example encode(const corpus::Review& review) const;
  Example encode(const Context& ctx, std::span<const std::string> words) const;

  // Gradient-carrying pass for training.
  ForwardOutput forward(nn::Tape& tape, std::span<const Example> batch);
  ForwardOutput forward(nn::Tape& tape, std::span<const Example> batch) const;

  // Unclamped rating head output.
  double raw_rating(int user, int item) const;

  std::string metadata() const;

 protected:
  NeuralRecommender(const ModelConfig& config, ModelDomain domain, std::uint64_t seed);

  virtual void build(Rng& rng) = 0;
  virtual ForwardOutput run(ParamBinder& bind, std::span<const Example> batch) const = 0;

  void check_ids(int user, int item) const;
  void check_batch(std::span<const Example> batch) const;
  std::size_t vocab_size() const { return domain_.vocab.size(); }

  ModelConfig config_;
  ModelDomain domain_;
  std::uint64_t seed_;
  nn::ParamStore params_;

 private:
  std::vector<double> example_log_likelihoods(std::span<const Example> batch) const;
};

// Checkpoint round trip. The header records the model seed, optimizer step,
// the caller's config hash and the full architecture description.
void save_model(const std::filesystem::path& path, const NeuralRecommender& model,
                std::uint64_t config_hash);
std::unique_ptr<NeuralRecommender> load_model(const std::filesystem::path& path,
                                              std::uint64_t* config_hash = nullptr);

}  // namespace revexp::models
