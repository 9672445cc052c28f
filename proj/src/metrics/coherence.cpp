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

#include "revexp/metrics/coherence.hpp"

#include <cmath>
#include <limits>

#include "revexp/corpus/analysis.hpp"
#include "revexp/error.hpp"

namespace revexp::metrics {

double match_f1(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  if (precision > 0.0 && recall > 0.0) return 2.0 * precision * recall / (precision + recall);
  return std::min(precision, recall);
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    dot += a[c] * b[c];
    na += a[c] * a[c];
    nb += b[c] * b[c];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

MatchScore greedy_match_f1(std::span<const std::string> generated,
                           std::span<const std::string> reference, const corpus::Vocab& vocab,
                           const nn::Tensor& embeddings) {
  if (generated.empty() || reference.empty()) throw Error("greedy match of an empty text");
  if (embeddings.rows() != vocab.size()) throw Error("embedding table does not match vocabulary");
  const std::vector<int> g = vocab.encode(generated, false);
  const std::vector<int> r = vocab.encode(reference, false);
  std::vector<std::vector<double>> sim(g.size(), std::vector<double>(r.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      sim[i][j] = cosine(embeddings.row(static_cast<std::size_t>(g[i])),
                         embeddings.row(static_cast<std::size_t>(r[j])));
    }
  }
  MatchScore s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < r.size(); ++j) best = std::max(best, sim[i][j]);
    s.precision += best;
  }
  for (std::size_t j = 0; j < r.size(); ++j) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) best = std::max(best, sim[i][j]);
    s.recall += best;
  }
  s.precision /= static_cast<double>(g.size());
  s.recall /= static_cast<double>(r.size());
  s.f1 = match_f1(s.precision, s.recall);
  return s;
}

BigramLM::BigramLM(const corpus::Vocab& vocab, std::span<const corpus::Review> train, double k)
    : vocab_(vocab), k_(k), targets_(vocab.size()), counts_(vocab.size(),
                                                            std::vector<double>(vocab.size())),
      totals_(vocab.size(), 0.0) {
  if (!(k > 0.0)) throw Error("bigram smoothing must be positive");
  for (const auto& r : train) {
    int prev = corpus::Vocab::kBos;
    for (const int id : vocab.encode(r.tokens, true)) {
      counts_[static_cast<std::size_t>(prev)][static_cast<std::size_t>(id)] += 1.0;
      totals_[static_cast<std::size_t>(prev)] += 1.0;
      prev = id;
    }
  }
}

double BigramLM::probability(int context, int next) const {
  const auto c = static_cast<std::size_t>(context), n = static_cast<std::size_t>(next);
  return (counts_.at(c).at(n) + k_) / (totals_[c] + k_ * static_cast<double>(targets_));
}

double cond_nll_score(std::span<const std::string> generated,
                      std::span<const std::string> reference, const BigramLM& lm, double lambda) {
  if (generated.empty()) throw Error("cond-nll of an empty text");
  if (reference.empty()) throw Error("cond-nll needs a reference");
  if (lambda < 0.0 || lambda > 1.0) throw Error("interpolation weight outside [0, 1]");
  const corpus::Vocab& vocab = lm.vocab();
  const std::vector<int> ref = vocab.encode(reference, true);
  const std::vector<int> gen = vocab.encode(generated, true);
  double nll = 0.0;
  int prev = corpus::Vocab::kBos;
  for (const int next : gen) {
    double ref_hits = 0.0, ref_total = 0.0;
    for (std::size_t t = 0; t + 1 < ref.size(); ++t) {
      if (ref[t] != prev) continue;
      ref_total += 1.0;
      if (ref[t + 1] == next) ref_hits += 1.0;
    }
    double p = lm.probability(prev, next);
    if (ref_total > 0.0) p = lambda * (ref_hits / ref_total) + (1.0 - lambda) * p;
    nll -= std::log(p);
    prev = next;
  }
  return nll / static_cast<double>(gen.size());
}

bool entail_proxy(std::span<const std::string> generated, std::span<const std::string> reference,
                  const corpus::Lexicon& lexicon) {
  const auto a = corpus::extract_aspect(generated, lexicon);
  const auto b = corpus::extract_aspect(reference, lexicon);
  if (!a || !b || *a != *b) return false;
  return corpus::classify_polarity(generated, lexicon) ==
         corpus::classify_polarity(reference, lexicon);
}

double rmse(std::span<const double> predicted, std::span<const double> gold) {
  if (predicted.size() != gold.size()) throw Error("rmse inputs differ in length");
  if (predicted.empty()) throw Error("rmse of empty inputs");
  double se = 0.0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    se += (predicted[k] - gold[k]) * (predicted[k] - gold[k]);
  }
  return std::sqrt(se / static_cast<double>(gold.size()));
}

namespace {

void check_aligned(std::span<const models::Generation> generations,
                   std::span<const corpus::Review> references) {
  if (generations.size() > references.size()) throw Error("more generations than references");
  for (std::size_t k = 0; k < generations.size(); ++k) {
    if (generations[k].user != references[k].user || generations[k].item != references[k].item) {
      throw Error("generation " + std::to_string(k) + " does not match its reference");
    }
  }
  if (generations.empty()) throw Error("no generations to score");
}

// Mean of per-instance values, skipping empty generations.
MetricResult average(std::string name, Direction dir, std::string config,
                     std::span<const models::Generation> generations,
                     const std::vector<double>& values, bool audit) {
  MetricResult res;
  res.name = std::move(name);
  res.direction = dir;
  res.config = std::move(config);
  double sum = 0.0;
  for (std::size_t k = 0; k < generations.size(); ++k) {
    if (generations[k].words.empty()) {
      ++res.excluded;
      if (audit) res.audit.push_back(res.name + "\t" + std::to_string(k) + "\texcluded");
      continue;
    }
    sum += values[k];
    ++res.samples;
    if (audit) res.audit.push_back(res.name + "\t" + std::to_string(k) + "\t" + exact(values[k]));
  }
  if (res.samples == 0) throw Error(res.name + ": every generation is empty");
  res.value = sum / static_cast<double>(res.samples);
  return res;
}

}  // namespace

MetricResult entail_metric(std::span<const models::Generation> generations,
                           std::span<const corpus::Review> references,
                           const corpus::Lexicon& lexicon, bool audit) {
  check_aligned(generations, references);
  std::vector<double> v(generations.size(), 0.0);
  for (std::size_t k = 0; k < generations.size(); ++k) {
    if (generations[k].words.empty()) continue;
    v[k] = entail_proxy(generations[k].words, references[k].tokens, lexicon) ? 100.0 : 0.0;
  }
  return average("Entail", Direction::kHigherBetter, "rule=aspect+polarity", generations, v,
                 audit);
}

MetricResult greedy_match_metric(std::span<const models::Generation> generations,
                                 std::span<const corpus::Review> references,
                                 const corpus::Vocab& vocab, const nn::Tensor& embeddings,
                                 Execution execution, bool audit) {
  check_aligned(generations, references);
  std::vector<double> v(generations.size(), 0.0);
  for_each_instance(generations.size(), execution, [&](std::size_t k) {
    if (generations[k].words.empty()) return;
    v[k] = greedy_match_f1(generations[k].words, references[k].tokens, vocab, embeddings).f1;
  });
  return average("GreedyF1", Direction::kHigherBetter, "embeddings=aux_regressor", generations,
                 v, audit);
}

MetricResult cond_nll_metric(std::span<const models::Generation> generations,
                             std::span<const corpus::Review> references, const BigramLM& lm,
                             double lambda, Execution execution, bool audit) {
  check_aligned(generations, references);
  std::vector<double> v(generations.size(), 0.0);
  for_each_instance(generations.size(), execution, [&](std::size_t k) {
    if (generations[k].words.empty()) return;
    v[k] = cond_nll_score(generations[k].words, references[k].tokens, lm, lambda);
  });
  return average("CondNLL", Direction::kLowerBetter, "lambda=" + exact(lambda), generations, v,
                 audit);
}

MetricResult rmse_metric(const models::ExplainableRecommender& model,
                         std::span<const corpus::Review> reviews, Execution execution,
                         bool audit) {
  if (reviews.empty()) throw Error("RMSE needs reviews");
  std::vector<double> pred(reviews.size()), gold(reviews.size());
  for_each_instance(reviews.size(), execution, [&](std::size_t k) {
    pred[k] = model.predict_rating(reviews[k].user, reviews[k].item);
    gold[k] = reviews[k].rating;
  });
  MetricResult res;
  res.name = "RMSE";
  res.direction = Direction::kLowerBetter;
  res.value = rmse(pred, gold);
  res.samples = reviews.size();
  if (audit) {
    for (std::size_t k = 0; k < reviews.size(); ++k) {
      res.audit.push_back("RMSE\t" + std::to_string(k) + "\t" + std::to_string(reviews[k].user) +
                          "\t" + std::to_string(reviews[k].item) + "\t" + exact(pred[k]) + "\t" +
                          exact(gold[k]));
    }
  }
  return res;
}

}  // namespace revexp::metrics
