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

#include "revexp/metrics/aux_regressor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "revexp/corpus/text.hpp"
#include "revexp/error.hpp"
#include "revexp/nn/checkpoint.hpp"
#include "revexp/nn/ops.hpp"
#include "revexp/nn/optim.hpp"
#include "revexp/rng.hpp"

namespace revexp::metrics {

std::string AuxConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "embedding=" << embedding << "\nhidden=" << hidden << "\nepochs=" << epochs
     << "\nbatch_size=" << batch_size << "\nlearning_rate=" << learning_rate
     << "\npatience=" << patience << "\nshuffle_labels=" << (shuffle_labels ? 1 : 0) << "\n";
  return os.str();
}

AuxRegressor::AuxRegressor(corpus::Vocab vocab, std::size_t embedding, std::size_t hidden,
                           double prior, std::uint64_t seed)
    : vocab_(std::move(vocab)), embedding_(embedding), hidden_(hidden), prior_(prior), seed_(seed) {
  Rng rng(seed);
  word_emb_ = params_.add("word_emb", {vocab_.size(), embedding}, nn::Init::kUniform, rng);
  query_ = params_.add("pool_query", {1, embedding}, nn::Init::kUniform, rng);
  w1_ = params_.add("head_w1", {embedding, hidden}, nn::Init::kUniform, rng);
  b1_ = params_.add("head_b1", {1, hidden}, nn::Init::kZeros, rng);
  w2_ = params_.add("head_w2", {hidden, 1}, nn::Init::kUniform, rng);
  b2_ = params_.add("head_b2", nn::Tensor({1, 1}, prior));
}

template <typename Store>
nn::Var AuxRegressor::run(nn::Tape& tape, Store& store,
                          std::span<const std::vector<int>> texts) const {
  if (texts.empty()) throw Error("regressor batch is empty");
  std::size_t len = 0;
  for (const auto& t : texts) {
    if (t.empty()) throw Error("regressor input is empty");
    len = std::max(len, t.size());
  }
  const std::size_t B = texts.size();
  const nn::Var emb = tape.param(store, word_emb_);
  std::vector<std::size_t> rows;
  rows.reserve(B * len);
  nn::AttentionLayout layout;
  layout.batch = B;
  layout.query_len = 1;
  layout.key_len = len;
  layout.heads = 1;
  layout.visible.assign(B * len, 0);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t t = 0; t < len; ++t) {
      const bool real = t < texts[b].size();
      rows.push_back(static_cast<std::size_t>(real ? texts[b][t] : corpus::Vocab::kPad));
      layout.visible[b * len + t] = real ? 1 : 0;
    }
  }
  const nn::Var keys = nn::gather(emb, rows);
  const std::vector<std::size_t> zeros(B, 0);
  const nn::Var queries = nn::gather(tape.param(store, query_), zeros);
  const nn::Var pooled = nn::attention(queries, keys, keys, layout);
  const nn::Var h = nn::tanh(nn::matmul(pooled, tape.param(store, w1_), tape.param(store, b1_)));
  return nn::matmul(h, tape.param(store, w2_), tape.param(store, b2_));
}

nn::Var AuxRegressor::forward(nn::Tape& tape, std::span<const std::vector<int>> texts,
                              bool train) {
  if (train) return run(tape, params_, texts);
  return run(tape, std::as_const(params_), texts);
}

std::vector<double> AuxRegressor::predict(std::span<const corpus::Tokens> texts) const {
  std::vector<std::vector<int>> ids;
  ids.reserve(texts.size());
  for (const auto& t : texts) ids.push_back(vocab_.encode(t, false));
  nn::Tape tape(false);
  const nn::Var out = run(tape, params_, ids);
  std::vector<double> pred(texts.size());
  for (std::size_t b = 0; b < pred.size(); ++b) pred[b] = std::clamp(out.value()[b], 1.0, 5.0);
  return pred;
}

double AuxRegressor::predict(std::span<const std::string> words) const {
  const corpus::Tokens t(words.begin(), words.end());
  return predict(std::span<const corpus::Tokens>(&t, 1)).front();
}

double regressor_mse(const AuxRegressor& reg, std::span<const corpus::Review> reviews) {
  if (reviews.empty()) throw Error("regressor mse of an empty review list");
  double se = 0.0;
  constexpr std::size_t kChunk = 256;
  for (std::size_t s = 0; s < reviews.size(); s += kChunk) {
    const std::size_t e = std::min(reviews.size(), s + kChunk);
    std::vector<corpus::Tokens> texts;
    for (std::size_t k = s; k < e; ++k) texts.push_back(reviews[k].tokens);
    const std::vector<double> p = reg.predict(texts);
    for (std::size_t k = s; k < e; ++k) {
      const double d = p[k - s] - reviews[k].rating;
      se += d * d;
    }
  }
  return se / static_cast<double>(reviews.size());
}

AuxRegressor train_aux_regressor(const corpus::Corpus& corpus, const AuxConfig& cfg,
                                 std::uint64_t seed, std::ostream* log) {
  if (corpus.train.empty()) throw Error("cannot train the regressor on an empty train split");
  if (cfg.epochs == 0 || cfg.batch_size == 0) throw Error("regressor epochs and batch size");
  std::vector<std::vector<int>> texts;
  std::vector<double> ratings;
  for (const auto& r : corpus.train) {
    texts.push_back(corpus.vocab.encode(r.tokens, false));
    ratings.push_back(r.rating);
  }
  if (cfg.shuffle_labels) {
    Rng rng(derive_seed(seed, 0x1abe1ULL));
    rng.shuffle(std::span<double>(ratings));
  }
  const double prior =
      std::accumulate(ratings.begin(), ratings.end(), 0.0) / static_cast<double>(ratings.size());
  AuxRegressor reg(corpus.vocab, cfg.embedding, cfg.hidden, prior, seed);
  const std::span<const corpus::Review> held_out =
      corpus.validation.empty() ? std::span<const corpus::Review>(corpus.train)
                                : std::span<const corpus::Review>(corpus.validation);

  nn::AdamConfig adam;
  adam.learning_rate = cfg.learning_rate;
  std::vector<std::size_t> order(texts.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<nn::Tensor> best_values = reg.params().snapshot();
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, 0x5eedULL, epoch));
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t s = 0; s < order.size(); s += cfg.batch_size) {
      const std::size_t e = std::min(order.size(), s + cfg.batch_size);
      std::vector<std::vector<int>> batch;
      std::vector<double> gold;
      for (std::size_t k = s; k < e; ++k) {
        batch.push_back(texts[order[k]]);
        gold.push_back(ratings[order[k]]);
      }
      reg.params().zero_grad();
      nn::Tape tape;
      const nn::Var loss = nn::squared_error(reg.forward(tape, batch, true), gold);
      if (!std::isfinite(loss.value()[0])) {
        throw Error("regressor training diverged in epoch " + std::to_string(epoch));
      }
      tape.backward(loss);
      reg.params().clip_grad_norm(5.0);
      nn::adam_step(reg.params(), adam);
    }
    const double val = regressor_mse(reg, held_out);
    if (!std::isfinite(val)) {
      throw Error("regressor training diverged in epoch " + std::to_string(epoch));
    }
    if (log) *log << "aux_regressor epoch " << epoch << " validation mse " << val << "\n";
    if (val < best) {
      best = val;
      best_values = reg.params().snapshot();
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      break;
    }
  }
  reg.params().restore(best_values);
  reg.validation_mse = best;
  return reg;
}

void save_aux_regressor(const std::filesystem::path& path, const AuxRegressor& reg,
                        std::uint64_t config_hash) {
  nn::CheckpointHeader h;
  h.seed = reg.seed();
  h.step = reg.params().step();
  h.config_hash = config_hash;
  std::ostringstream os;
  os << "architecture=aux_regressor\nembedding=" << reg.embedding() << "\nhidden=" << reg.hidden()
     << "\nprior=" << std::hexfloat << reg.prior() << "\nvalidation_mse=" << reg.validation_mse
     << std::defaultfloat << "\nvocab=";
  const auto& toks = reg.vocab().tokens();
  for (std::size_t i = corpus::Vocab::kReserved; i < toks.size(); ++i) {
    if (i > corpus::Vocab::kReserved) os << ' ';
    os << toks[i];
  }
  os << "\n";
  h.metadata = os.str();
  nn::save_checkpoint(path, h, reg.params());
}

AuxRegressor load_aux_regressor(const std::filesystem::path& path, std::uint64_t* config_hash) {
  nn::Checkpoint ck = nn::load_checkpoint(path);
  std::unordered_map<std::string, std::string> kv;
  std::istringstream in(ck.header.metadata);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* key : {"architecture", "embedding", "hidden", "prior", "validation_mse", "vocab"}) {
    if (!kv.count(key)) throw Error(path.string() + ": regressor metadata lacks '" + key + "'");
  }
  if (kv["architecture"] != "aux_regressor") throw Error(path.string() + " is not a regressor");
  std::vector<std::vector<std::string>> vt{corpus::tokenize(kv["vocab"])};
  AuxRegressor reg(corpus::Vocab::from_texts(vt), std::stoull(kv["embedding"]),
                   std::stoull(kv["hidden"]), std::strtod(kv["prior"].c_str(), nullptr),
                   ck.header.seed);
  reg.validation_mse = std::strtod(kv["validation_mse"].c_str(), nullptr);
  nn::ParamStore& p = reg.params();
  if (p.size() != ck.params.size()) throw Error(path.string() + ": parameter count mismatch");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].name != ck.params[i].name || !p[i].value.same_shape(ck.params[i].value)) {
      throw Error(path.string() + ": parameter '" + ck.params[i].name + "' mismatch");
    }
    p[i].value = ck.params[i].value;
  }
  p.set_step(ck.header.step);
  if (config_hash) *config_hash = ck.header.config_hash;
  return reg;
}

MetricResult tlae(const AuxRegressor& reg, std::span<const models::Generation> generations,
                  std::span<const corpus::Review> reviews, TlaeTarget target, Execution execution,
                  bool audit) {
  if (generations.empty()) throw Error("TLAE needs generations");
  if (target == TlaeTarget::kGoldRating && reviews.size() < generations.size()) {
    throw Error("TLAE gold mode needs a review per generation");
  }
  std::vector<double> pred(generations.size(), 0.0);
  for_each_instance(generations.size(), execution, [&](std::size_t k) {
    if (!generations[k].words.empty()) pred[k] = reg.predict(generations[k].words);
  });
  MetricResult res;
  res.name = target == TlaeTarget::kModelRating ? "TLAE" : "TLAE (gold rating)";
  res.direction = Direction::kLowerBetter;
  res.config = target == TlaeTarget::kModelRating ? "target=model-rating" : "target=gold-rating";
  double se = 0.0;
  for (std::size_t k = 0; k < generations.size(); ++k) {
    const models::Generation& g = generations[k];
    if (g.words.empty()) {
      ++res.excluded;
      if (audit) res.audit.push_back(res.name + "\t" + std::to_string(k) + "\texcluded");
      continue;
    }
    const double t = target == TlaeTarget::kModelRating ? g.predicted_rating
                                                         : static_cast<double>(reviews[k].rating);
    se += (pred[k] - t) * (pred[k] - t);
    ++res.samples;
    if (audit) {
      res.audit.push_back(res.name + "\t" + std::to_string(k) + "\t" + std::to_string(g.user) +
                          "\t" + std::to_string(g.item) + "\t" + exact(pred[k]) + "\t" + exact(t));
    }
  }
  if (res.samples == 0) throw Error("TLAE: every generation is empty");
  res.value = se / static_cast<double>(res.samples);
  return res;
}

}  // namespace revexp::metrics
