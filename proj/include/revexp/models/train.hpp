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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "revexp/corpus/corpus.hpp"
#include "revexp/models/neural.hpp"

namespace revexp::models {

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  double learning_rate = 2e-3;
  // Weight of the rating loss.
  double lambda = 1.0;
  // Epochs without validation improvement before stopping.
  std::size_t patience = 3;
  double clip_norm = 5.0;

  void validate() const;
  std::string describe() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct EpochLog {
  std::size_t epoch = 0;
  LossParts train;
  LossParts validation;
};

struct TrainResult {
  std::unique_ptr<NeuralRecommender> model;
  std::vector<EpochLog> epochs;
  std::size_t best_epoch = 0;
};

// Mean token nll and mean squared rating error over a review list.
LossParts evaluate_loss(const NeuralRecommender& model, std::span<const corpus::Review> reviews,
                        double lambda, std::size_t batch_size = 64);

// Initializes from `seed` and also shuffles batches with streams derived from
// it. Keeps the parameters of the epoch with the lowest validation loss.
TrainResult train(const ModelConfig& model_config, const corpus::Corpus& corpus,
                  const TrainConfig& train_config, std::uint64_t seed,
                  std::ostream* log = nullptr);

}  // namespace revexp::models
