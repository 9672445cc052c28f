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

#include "revexp/models/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "revexp/error.hpp"
#include "revexp/nn/optim.hpp"

namespace revexp::models {

void TrainConfig::validate() const {
  if (epochs == 0) throw Error("epochs must be positive");
  if (batch_size == 0) throw Error("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw Error("learning_rate must be positive");
  if (lambda < 0.0) throw Error("lambda must be non-negative");
  if (!(clip_norm > 0.0)) throw Error("clip_norm must be positive");
}

std::string TrainConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "epochs=" << epochs << "\nbatch_size=" << batch_size << "\nlearning_rate=" << learning_rate
     << "\nlambda=" << lambda << "\npatience=" << patience << "\nclip_norm=" << clip_norm << "\n";
  return os.str();
}

LossParts evaluate_loss(const NeuralRecommender& model, std::span<const corpus::Review> reviews,
                        double lambda, std::size_t batch_size) {
  if (reviews.empty()) throw Error("loss of an empty review list");
  double nll = 0.0, se = 0.0;
  std::size_t tokens = 0;
  for (std::size_t start = 0; start < reviews.size(); start += batch_size) {
    const std::size_t end = std::min(reviews.size(), start + batch_size);
    std::vector<Example> batch;
    for (std::size_t k = start; k < end; ++k) batch.push_back(model.encode(reviews[k]));
    nn::Tape tape(false);
    const ForwardOutput out = model.forward(tape, batch);
    const nn::Tensor& logits = out.logits.value();
    for (std::size_t r = 0; r < out.targets.size(); ++r) {
      const auto row = logits.row(r);
      double m = row[0];
      for (const double x : row) m = std::max(m, x);
      double s = 0.0;
      for (const double x : row) s += std::exp(x - m);
      nll += m + std::log(s) - row[static_cast<std::size_t>(out.targets[r])];
    }
    tokens += out.targets.size();
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const double d = out.rating.value()[b] - batch[b].rating;
      se += d * d;
    }
  }
  LossParts p;
  p.nll = nll / static_cast<double>(tokens);
  p.mse = se / static_cast<double>(reviews.size());
  p.total = p.nll + lambda * p.mse;
  return p;
}

TrainResult train(const ModelConfig& model_config, const corpus::Corpus& corpus,
                  const TrainConfig& cfg, std::uint64_t seed, std::ostream* log) {
  cfg.validate();
  if (corpus.train.empty()) throw Error("cannot train on an empty train split");
  TrainResult result;
  result.model = NeuralRecommender::create(model_config, ModelDomain::from_corpus(corpus), seed);
  NeuralRecommender& model = *result.model;

  std::vector<Example> examples;
  examples.reserve(corpus.train.size());
  for (const auto& r : corpus.train) examples.push_back(model.encode(r));
  const std::span<const corpus::Review> held_out =
      corpus.validation.empty() ? std::span<const corpus::Review>(corpus.train)
                                : std::span<const corpus::Review>(corpus.validation);

  nn::AdamConfig adam;
  adam.learning_rate = cfg.learning_rate;
  std::vector<std::size_t> order(examples.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<nn::Tensor> best_values = model.params().snapshot();
  std::size_t since_best = 0;
  std::size_t last_finite = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, 0x7a11ULL, epoch));
    rng.shuffle(std::span<std::size_t>(order));

    LossParts sum;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<Example> batch;
      std::vector<double> ratings;
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back(examples[order[k]]);
        ratings.push_back(batch.back().rating);
      }
      model.params().zero_grad();
      nn::Tape tape;
      const ForwardOutput out = model.forward(tape, batch);
      LossParts parts;
      const nn::Var loss =
          joint_loss(out.logits, out.targets, out.rating, ratings, cfg.lambda, &parts);
      if (!std::isfinite(parts.total)) {
        throw Error("training diverged in epoch " + std::to_string(epoch) +
                    "; last finite epoch " + std::to_string(last_finite));
      }
      tape.backward(loss);
      model.params().clip_grad_norm(cfg.clip_norm);
      nn::adam_step(model.params(), adam);
      sum.total += parts.total;
      sum.nll += parts.nll;
      sum.mse += parts.mse;
      ++batches;
    }

    EpochLog e;
    e.epoch = epoch;
    e.train.total = sum.total / static_cast<double>(batches);
    e.train.nll = sum.nll / static_cast<double>(batches);
    e.train.mse = sum.mse / static_cast<double>(batches);
    e.validation = evaluate_loss(model, held_out, cfg.lambda);
    if (!std::isfinite(e.validation.total)) {
      throw Error("training diverged in epoch " + std::to_string(epoch) + "; last finite epoch " +
                  std::to_string(last_finite));
    }
    last_finite = epoch;
    result.epochs.push_back(e);
    if (log) {
      *log << model.kind() << " epoch " << epoch << " train " << e.train.total << " (nll "
           << e.train.nll << ", mse " << e.train.mse << ") val " << e.validation.total << " (nll "
           << e.validation.nll << ", mse " << e.validation.mse << ")\n";
    }
    if (e.validation.total < best) {
      best = e.validation.total;
      best_values = model.params().snapshot();
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience && cfg.patience > 0) {
      break;
    }
  }
  model.params().restore(best_values);
  return result;
}

}  // namespace revexp::models
