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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "revexp/corpus/corpus.hpp"
#include "revexp/metrics/result.hpp"
#include "revexp/models/generation.hpp"
#include "revexp/nn/param_store.hpp"
#include "revexp/nn/tape.hpp"

namespace revexp::metrics {

struct AuxConfig {
  std::size_t embedding = 32;
  std::size_t hidden = 32;
  std::size_t epochs = 12;
  std::size_t batch_size = 32;
  double learning_rate = 3e-3;
  std::size_t patience = 3;
  // Control run: train on ratings shuffled across reviews.
  bool shuffle_labels = false;
  std::string describe() const;
};

// Text-only rating regressor: word embeddings, attention pooling with a
// learned query, then a tanh feed-forward head.
class AuxRegressor {
 public:
  AuxRegressor(corpus::Vocab vocab, std::size_t embedding, std::size_t hidden, double prior,
               std::uint64_t seed);

  // Clamped to [1, 5]. Empty texts are an error.
  double predict(std::span<const std::string> words) const;
  std::vector<double> predict(std::span<const corpus::Tokens> texts) const;

  // Unclamped predictions as a tape node, one row per text.
  nn::Var forward(nn::Tape& tape, std::span<const std::vector<int>> texts, bool train);

  const corpus::Vocab& vocab() const { return vocab_; }
  const nn::Tensor& embeddings() const { return params_[word_emb_].value; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t embedding() const { return embedding_; }
  std::size_t hidden() const { return hidden_; }
  double prior() const { return prior_; }

  // Held-out mean squared error recorded by training.
  double validation_mse = 0.0;

 private:
  template <typename Store>
  nn::Var run(nn::Tape& tape, Store& store, std::span<const std::vector<int>> texts) const;

  corpus::Vocab vocab_;
  std::size_t embedding_, hidden_;
  double prior_;
  std::uint64_t seed_;
  nn::ParamStore params_;
  nn::ParamId word_emb_ = 0, query_ = 0, w1_ = 0, b1_ = 0, w2_ = 0, b2_ = 0;
};

// Trained on the train split, model-selected on validation MSE.
AuxRegressor train_aux_regressor(const corpus::Corpus& corpus, const AuxConfig& config,
                                 std::uint64_t seed, std::ostream* log = nullptr);

double regressor_mse(const AuxRegressor& reg, std::span<const corpus::Review> reviews);

void save_aux_regressor(const std::filesystem::path& path, const AuxRegressor& reg,
                        std::uint64_t config_hash);
AuxRegressor load_aux_regressor(const std::filesystem::path& path,
                                std::uint64_t* config_hash = nullptr);

enum class TlaeTarget { kModelRating, kGoldRating };

// MSE between the regressor's reading of each generated text and the target
// rating. `reviews` supplies gold ratings and is aligned with `generations`.
MetricResult tlae(const AuxRegressor& reg, std::span<const models::Generation> generations,
                  std::span<const corpus::Review> reviews, TlaeTarget target,
                  Execution execution = Execution::kParallel, bool audit = false);

}  // namespace revexp::metrics
