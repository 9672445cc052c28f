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

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "revexp/corpus/corpus.hpp"
#include "revexp/metrics/ranking.hpp"
#include "revexp/models/recommender.hpp"
#include "revexp/nn/tensor.hpp"
#include "revexp/perturb/perturb.hpp"

// Straightforward reimplementations of the rank and similarity metrics, kept
// apart from the library code they check.
namespace revexp::testing {

// Small synthetic corpus number `i` of the fixture family.
inline corpus::Corpus fixture_corpus(int i) {
  const auto world = corpus::generate_world(10 + i, 10 + i % 3, 4, 100 + static_cast<unsigned>(i));
  return corpus::build_corpus(world, 8, {0.5, 0.1, 0.4}, 200 + static_cast<unsigned>(i));
}

// Rounds another model's log-likelihood to whole nats, so ties are common.
class CoarseScorer final : public models::ExplainableRecommender {
 public:
  explicit CoarseScorer(const models::ExplainableRecommender& inner) : inner_(inner) {}
  std::string kind() const override { return "coarse"; }
  double predict_rating(int u, int i) const override { return inner_.predict_rating(u, i); }
  corpus::Tokens generate(const models::Context& c,
                          const models::DecodeOptions& o) const override {
    return inner_.generate(c, o);
  }
  double log_likelihood(const models::Context& c,
                        std::span<const std::string> w) const override {
    return std::round(inner_.log_likelihood(c, w));
  }

 private:
  const models::ExplainableRecommender& inner_;
};

// Same texts, perplexity squared.
class SquaredPerplexity final : public models::ExplainableRecommender {
 public:
  explicit SquaredPerplexity(const models::ExplainableRecommender& inner) : inner_(inner) {}
  std::string kind() const override { return inner_.kind(); }
  double predict_rating(int u, int i) const override { return inner_.predict_rating(u, i); }
  corpus::Tokens generate(const models::Context& c,
                          const models::DecodeOptions& o) const override {
    return inner_.generate(c, o);
  }
  double log_likelihood(const models::Context& c,
                        std::span<const std::string> w) const override {
    return 2.0 * inner_.log_likelihood(c, w);
  }

 private:
  const models::ExplainableRecommender& inner_;
};

inline double brute_perplexity(const models::ExplainableRecommender& m, const models::Context& c,
                               const corpus::Tokens& words) {
  return std::exp(-m.log_likelihood(c, words) / static_cast<double>(words.size() + 1));
}

struct BruteAir {
  double value = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

inline BruteAir brute_air(const models::ExplainableRecommender& m,
                          std::span<const corpus::Review> reviews,
                          const perturb::Negator& negator) {
  BruteAir out;
  std::size_t flipped = 0;
  for (const auto& r : reviews) {
    if (r.rating < 4) continue;
    const auto neg = negator.negate(r.tokens);
    if (!neg) {
      ++out.skipped;
      continue;
    }
    ++out.evaluated;
    const models::Context c{r.user, r.item, r.aspect};
    if (brute_perplexity(m, c, neg->perturbed) < brute_perplexity(m, c, r.tokens)) ++flipped;
  }
  if (out.evaluated > 0) {
    out.value = 100.0 * (1.0 - static_cast<double>(flipped) / static_cast<double>(out.evaluated));
  }
  return out;
}

// Sorts all texts by perplexity with the gold text placed after its ties.
inline double brute_mrr(const models::ExplainableRecommender& m,
                        std::span<const corpus::Review> reviews,
                        std::span<const metrics::MrrInstance> instances) {
  double sum = 0.0;
  for (const auto& inst : instances) {
    const auto& g = reviews[inst.gold];
    const models::Context c{g.user, g.item, g.aspect};
    std::vector<std::pair<double, int>> order;
    for (std::size_t t = 0; t < inst.texts.size(); ++t) {
      order.emplace_back(brute_perplexity(m, c, inst.texts[t]), t == 0 ? 1 : 0);
    }
    std::sort(order.begin(), order.end());
    std::size_t pos = 0;
    while (order[pos].second != 1) ++pos;
    sum += 1.0 / static_cast<double>(pos + 1);
  }
  return 100.0 * (sum / static_cast<double>(instances.size()));
}

inline double brute_greedy_f1(const corpus::Tokens& gen, const corpus::Tokens& ref,
                              const corpus::Vocab& vocab, const nn::Tensor& emb) {
  auto cos = [&](const std::string& a, const std::string& b) {
    const auto ra = emb.row(static_cast<std::size_t>(vocab.id(a)));
    const auto rb = emb.row(static_cast<std::size_t>(vocab.id(b)));
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < ra.size(); ++k) {
      dot += ra[k] * rb[k];
      na += ra[k] * ra[k];
      nb += rb[k] * rb[k];
    }
    return na == 0.0 || nb == 0.0 ? 0.0 : dot / (std::sqrt(na) * std::sqrt(nb));
  };
  double p = 0.0, r = 0.0;
  for (const auto& a : gen) {
    double best = -2.0;
    for (const auto& b : ref) best = std::max(best, cos(a, b));
    p += best;
  }
  for (const auto& b : ref) {
    double best = -2.0;
    for (const auto& a : gen) best = std::max(best, cos(a, b));
    r += best;
  }
  p /= static_cast<double>(gen.size());
  r /= static_cast<double>(ref.size());
  if (p + r == 0.0) return 0.0;
  if (p > 0.0 && r > 0.0) return 2.0 * p * r / (p + r);
  return std::min(p, r);
}

inline double brute_rmse(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace revexp::testing
