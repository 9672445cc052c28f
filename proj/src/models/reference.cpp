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

#include "revexp/models/reference.hpp"

#include <cmath>

#include "revexp/corpus/vocab.hpp"
#include "revexp/corpus/world.hpp"
#include "revexp/error.hpp"
#include "revexp/rng.hpp"

namespace revexp::models {

OracleModel::OracleModel(std::shared_ptr<const corpus::GroundTruth> truth,
                         std::size_t vocab_size)
    : truth_(std::move(truth)), vocab_size_(vocab_size) {
  if (!truth_) throw Error("oracle model needs a synthetic ground truth");
  if (vocab_size_ < 2) throw Error("oracle model needs a vocabulary of at least 2 tokens");
}

corpus::Tokens OracleModel::gold(int user, int item) const {
  truth_->world.check_ids(user, item);
  return corpus::render_review(truth_->world, user, item,
                               corpus::render_seed(truth_->corpus_seed, user, item))
      .tokens;
}

double OracleModel::predict_rating(int user, int item) const {
  truth_->world.check_ids(user, item);
  return corpus::ground_truth_rating(truth_->world, user, item);
}

corpus::Tokens OracleModel::generate(const Context& ctx, const DecodeOptions& options) const {
  if (options.max_len < 2) throw Error("max_len must be at least 2");
  corpus::Tokens t = gold(ctx.user, ctx.item);
  if (t.size() > options.max_len - 1) t.resize(options.max_len - 1);
  t.emplace_back(corpus::Vocab::kEosToken);
  return t;
}

double OracleModel::log_likelihood(const Context& ctx,
                                   std::span<const std::string> words) const {
  corpus::Tokens g = gold(ctx.user, ctx.item);
  g.emplace_back(corpus::Vocab::kEosToken);
  const double v = static_cast<double>(vocab_size_);
  const double hit = std::log(kConfidence);
  const double miss = std::log((1.0 - kConfidence) / (v - 1.0));
  const double uniform = -std::log(v);
  double ll = 0.0;
  bool on_track = true;
  for (std::size_t t = 0; t <= words.size(); ++t) {
    const std::string_view tok =
        t < words.size() ? std::string_view(words[t]) : corpus::Vocab::kEosToken;
    if (!on_track) {
      ll += uniform;
    } else if (t < g.size() && g[t] == tok) {
      ll += hit;
    } else {
      ll += miss;
      on_track = false;
    }
  }
  return ll;
}

RandomScorer::RandomScorer(std::uint64_t seed, std::vector<std::string> words)
    : seed_(seed), words_(std::move(words)) {}

double RandomScorer::draw(int user, int item, std::span<const std::string> words) const {
  std::uint64_t h = fnv1a("");
  for (const auto& w : words) {
    h = fnv1a(w, h);
    h = fnv1a(" ", h);
  }
  const std::uint64_t key = derive_seed(seed_, derive_seed(static_cast<std::uint64_t>(user),
                                                           static_cast<std::uint64_t>(item)),
                                        h);
  return kMaxNats * static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

double RandomScorer::log_likelihood(const Context& ctx,
                                    std::span<const std::string> words) const {
  return -draw(ctx.user, ctx.item, words) * static_cast<double>(scored_positions(words));
}

double RandomScorer::predict_rating(int user, int item) const {
  const std::uint64_t key =
      derive_seed(seed_ ^ 0x5a17ULL, static_cast<std::uint64_t>(user), static_cast<std::uint64_t>(item));
  return 1.0 + 4.0 * static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

corpus::Tokens RandomScorer::generate(const Context& ctx, const DecodeOptions& options) const {
  if (options.max_len < 2) throw Error("max_len must be at least 2");
  if (words_.empty()) throw Error("random scorer has no word list to generate from");
  Rng rng(derive_seed(seed_ ^ 0x9e11ULL, static_cast<std::uint64_t>(ctx.user),
                      static_cast<std::uint64_t>(ctx.item)));
  const std::size_t len = 1 + rng.below(options.max_len - 1);
  corpus::Tokens t;
  for (std::size_t k = 0; k < len; ++k) t.push_back(words_[rng.below(words_.size())]);
  t.emplace_back(corpus::Vocab::kEosToken);
  return t;
}

UniformScorer::UniformScorer(std::size_t vocab_size) : vocab_size_(vocab_size) {
  if (vocab_size_ < 1) throw Error("uniform scorer needs a non-empty vocabulary");
}

corpus::Tokens UniformScorer::generate(const Context&, const DecodeOptions&) const {
  throw Error("uniform scorer does not generate text");
}

double UniformScorer::log_likelihood(const Context&, std::span<const std::string> words) const {
  return -static_cast<double>(scored_positions(words)) * std::log(static_cast<double>(vocab_size_));
}

}  // namespace revexp::models
