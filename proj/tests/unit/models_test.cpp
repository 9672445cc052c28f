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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "revexp/corpus/analysis.hpp"
#include "revexp/corpus/corpus.hpp"
#include "revexp/error.hpp"
#include "revexp/models/baselines.hpp"
#include "revexp/models/generation.hpp"
#include "revexp/models/neural.hpp"
#include "revexp/models/reference.hpp"
#include "revexp/models/train.hpp"
#include "revexp/nn/ops.hpp"

namespace revexp::models {
namespace {

using nn::Var;

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("revexp_models_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const corpus::Corpus& small_corpus() {
  static const corpus::Corpus c =
      corpus::build_corpus(corpus::generate_world(30, 15, 4, 5), 12, {}, 6);
  return c;
}

ModelConfig tiny(Architecture a, bool conditioned = false) {
  ModelConfig c;
  c.architecture = a;
  c.conditioned = conditioned;
  c.embedding = 8;
  c.hidden = 12;
  c.layers = 1;
  c.heads = 2;
  return c;
}

std::vector<ModelConfig> tiny_configs() {
  return {tiny(Architecture::kRecurrent), tiny(Architecture::kTransformer),
          tiny(Architecture::kTransformer, true)};
}

Context context_for(const corpus::Review& r) { return {r.user, r.item, r.aspect}; }

TEST(JointLoss, LambdaZeroIsPureNll) {
  nn::Tape tape;
  const Var logits = tape.constant(nn::Tensor({2, 3}, {0.1, 0.5, -0.3, 1.0, 0.0, 0.2}));
  const Var rating = tape.constant(nn::Tensor({1, 1}, {4.0}));
  const std::vector<int> targets = {1, 2};
  const std::vector<double> gold = {2.0};
  LossParts parts;
  const Var loss = joint_loss(logits, targets, rating, gold, 0.0, &parts);
  EXPECT_EQ(loss.value()[0], parts.nll);
  EXPECT_EQ(parts.nll, nn::nll_loss(logits.value(), targets, {false, false}));
  EXPECT_DOUBLE_EQ(parts.mse, 4.0);
}

TEST(JointLoss, HandBuiltBatchIsSumOfParts) {
  // Two reviews: one word plus EOS each, vocabulary of two.
  nn::Tape tape;
  const Var logits = tape.constant(nn::Tensor({4, 2}, {0.0, 0.0, 1.0, 0.0, 0.0, 2.0, -1.0, 1.0}));
  const Var rating = tape.constant(nn::Tensor({2, 1}, {3.5, 2.0}));
  const std::vector<int> targets = {0, 0, 1, 1};
  const std::vector<double> gold = {4.0, 1.0};
  const auto lse = [](double a, double b) { return std::log(std::exp(a) + std::exp(b)); };
  const double nll = ((lse(0, 0) - 0.0) + (lse(1, 0) - 1.0) + (lse(0, 2) - 2.0) +
                      (lse(-1, 1) - 1.0)) / 4.0;
  const double mse = (0.25 + 1.0) / 2.0;
  LossParts parts;
  const Var loss = joint_loss(logits, targets, rating, gold, 0.7, &parts);
  EXPECT_NEAR(parts.nll, nll, 1e-12);
  EXPECT_NEAR(parts.mse, mse, 1e-12);
  EXPECT_NEAR(loss.value()[0], nll + 0.7 * mse, 1e-12);
}

TEST(JointLoss, PerfectFitIsNearZero) {
  nn::Tape tape;
  const Var logits = tape.constant(nn::Tensor({2, 3}, {40.0, 0.0, 0.0, 0.0, 0.0, 40.0}));
  const Var rating = tape.constant(nn::Tensor({1, 1}, {5.0}));
  const std::vector<int> targets = {0, 2};
  const std::vector<double> gold = {5.0};
  EXPECT_LT(joint_loss(logits, targets, rating, gold, 1.0).value()[0], 1e-6);
}

TEST(JointLoss, Errors) {
  nn::Tape tape;
  const Var logits = tape.constant(nn::Tensor({1, 2}, {0.0, 0.0}));
  const Var rating = tape.constant(nn::Tensor({1, 1}, {3.0}));
  const std::vector<int> t = {0};
  const std::vector<double> g = {3.0};
  EXPECT_THROW(joint_loss(logits, {}, rating, {}, 1.0), Error);
  EXPECT_THROW(joint_loss(logits, t, rating, g, -0.5), Error);
}

TEST(NeuralModel, ColdStartIdIsRejected) {
  ModelDomain d = ModelDomain::from_corpus(small_corpus());
  d.seen_users[3] = false;
  const auto m = NeuralRecommender::create(tiny(Architecture::kTransformer), d, 1);
  try {
    m->predict_rating(3, 0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("cold-start id"), std::string::npos);
  }
  EXPECT_THROW(m->generate({3, 0, {}}, {}), Error);
  EXPECT_THROW(m->predict_rating(0, d.num_items), Error);
  EXPECT_NO_THROW(m->predict_rating(4, 0));
}

TEST(NeuralModel, RatingIsClamped) {
  for (const auto& cfg : tiny_configs()) {
    auto m = NeuralRecommender::create(cfg, ModelDomain::from_corpus(small_corpus()), 3);
    auto& w2 = m->params()[m->params().id("rating_w2")].value;
    w2.fill(0.0);
    m->params()[m->params().id("rating_b2")].value[0] = 7.2;
    EXPECT_DOUBLE_EQ(m->raw_rating(0, 0), 7.2);
    EXPECT_EQ(m->predict_rating(0, 0), 5.0);
    m->params()[m->params().id("rating_b2")].value[0] = -0.4;
    EXPECT_EQ(m->predict_rating(1, 2), 1.0);
  }
}

TEST(NeuralModel, MaxLenTwoTruncates) {
  for (const auto& cfg : tiny_configs()) {
    const auto m = NeuralRecommender::create(cfg, ModelDomain::from_corpus(small_corpus()), 4);
    const Context ctx{0, 1, "service"};
    DecodeOptions opt;
    opt.max_len = 2;
    const auto out = m->generate(ctx, opt);
    ASSERT_FALSE(out.empty());
    EXPECT_LE(out.size(), 2u);
    EXPECT_EQ(out.back(), corpus::Vocab::kEosToken);
    opt.max_len = 1;
    EXPECT_THROW(m->generate(ctx, opt), Error);
  }
}

TEST(NeuralModel, ConditionedNeedsAspect) {
  const auto m = NeuralRecommender::create(tiny(Architecture::kTransformer, true),
                                           ModelDomain::from_corpus(small_corpus()), 4);
  const std::vector<std::string> words = {"the", "service"};
  EXPECT_THROW(m->log_likelihood({0, 0, {}}, words), Error);
  EXPECT_TRUE(m->privileged());
  ModelConfig bad = tiny(Architecture::kRecurrent, true);
  EXPECT_THROW(bad.validate(), Error);
}

TEST(NeuralModel, PerplexityMatchesNllLoss) {
  const auto& c = small_corpus();
  Rng rng(17);
  for (const auto& cfg : tiny_configs()) {
    const auto m = NeuralRecommender::create(cfg, ModelDomain::from_corpus(c), 5);
    for (int trial = 0; trial < 20; ++trial) {
      const auto& r = c.test[rng.below(c.test.size())];
      const auto& text = c.train[rng.below(c.train.size())].tokens;
      const Context ctx = context_for(r);
      const Example e = m->encode(ctx, text);
      nn::Tape tape(false);
      const ForwardOutput out = m->forward(tape, {&e, 1});
      const double nll =
          nn::nll_loss(out.logits.value(), out.targets, std::vector<bool>(out.targets.size()));
      const double ppl = perplexity(*m, ctx, text);
      EXPECT_NEAR(ppl / std::exp(nll), 1.0, 1e-9);
      EXPECT_NEAR(ppl, std::exp(-m->log_likelihood(ctx, text) /
                                static_cast<double>(scored_positions(text))),
                  1e-9 * ppl);
      EXPECT_LE(m->log_likelihood(ctx, text), 0.0);
    }
  }
}

TEST(NeuralModel, BatchedScoringMatchesSingle) {
  const auto& c = small_corpus();
  for (const auto& cfg : tiny_configs()) {
    const auto m = NeuralRecommender::create(cfg, ModelDomain::from_corpus(c), 6);
    std::vector<corpus::Tokens> texts;
    for (std::size_t k = 0; k < 9; ++k) texts.push_back(c.train[k * 7].tokens);
    const Context ctx = context_for(c.test[0]);
    const auto batched = m->log_likelihoods(ctx, texts);
    for (std::size_t k = 0; k < texts.size(); ++k) {
      EXPECT_NEAR(batched[k], m->log_likelihood(ctx, texts[k]), 1e-9);
    }
  }
}

TEST(NeuralModel, EmptyTextHasNoPerplexity) {
  const auto m = NeuralRecommender::create(tiny(Architecture::kRecurrent),
                                           ModelDomain::from_corpus(small_corpus()), 7);
  EXPECT_THROW(perplexity(*m, {0, 0, {}}, {}), Error);
}

TEST(NeuralModel, JointLossGradientMatchesFiniteDifferences) {
  const corpus::Corpus c = corpus::build_corpus(corpus::generate_world(8, 6, 3, 41), 6, {}, 42);
  for (const auto& [arch, cond] : std::vector<std::pair<Architecture, bool>>{
           {Architecture::kRecurrent, false},
           {Architecture::kTransformer, false},
           {Architecture::kTransformer, true}}) {
    ModelConfig cfg;
    cfg.architecture = arch;
    cfg.conditioned = cond;
    cfg.embedding = 4;
    cfg.hidden = 6;
    cfg.layers = 1;
    cfg.heads = 2;
    auto m = NeuralRecommender::create(cfg, ModelDomain::from_corpus(c), 3);
    Rng rng(17);
    for (auto& p : m->params()) {
      for (double& v : p.value.values()) v = rng.uniform(-0.5, 0.5);
    }
    const std::vector<Example> batch{m->encode(c.train[0]), m->encode(c.train[5])};
    const std::vector<double> gold{static_cast<double>(c.train[0].rating),
                                   static_cast<double>(c.train[5].rating)};
    auto loss = [&](nn::Tape& t) {
      const ForwardOutput out = m->forward(t, batch);
      return joint_loss(out.logits, out.targets, out.rating, gold, 0.5);
    };
    m->params().zero_grad();
    {
      nn::Tape t;
      t.backward(loss(t));
    }
    // Whole-vector comparison; single tiny coordinates are roundoff bound.
    constexpr double eps = 1e-5;
    double diff = 0.0, norm = 0.0;
    for (auto& p : m->params()) {
      for (std::size_t i = 0; i < p.value.size(); ++i) {
        const double saved = p.value[i];
        p.value[i] = saved + eps;
        nn::Tape up(false);
        const double f_up = loss(up).value()[0];
        p.value[i] = saved - eps;
        nn::Tape down(false);
        const double f_down = loss(down).value()[0];
        p.value[i] = saved;
        const double numeric = (f_up - f_down) / (2.0 * eps);
        diff += (numeric - p.grad[i]) * (numeric - p.grad[i]);
        norm += p.grad[i] * p.grad[i];
      }
    }
    EXPECT_LT(std::sqrt(diff / norm), 1e-6) << m->kind();
  }
}

TEST(Train, OneEpochOnTenReviews) {
  corpus::Corpus c = small_corpus();
  c.train.resize(10);
  c.validation.assign(c.train.begin(), c.train.begin() + 3);
  TrainConfig tc;
  tc.epochs = 1;
  const TrainResult r = train(tiny(Architecture::kTransformer), c, tc, 9);
  ASSERT_EQ(r.epochs.size(), 1u);
  EXPECT_TRUE(std::isfinite(r.epochs[0].validation.total));
  EXPECT_TRUE(std::isfinite(r.epochs[0].train.total));
}

TEST(Train, DeterministicCheckpoints) {
  TrainConfig tc;
  tc.epochs = 2;
  for (const auto& cfg : tiny_configs()) {
    const TrainResult a = train(cfg, small_corpus(), tc, 21);
    const TrainResult b = train(cfg, small_corpus(), tc, 21);
    EXPECT_TRUE(a.model->params().same_values(b.model->params()));
    const auto pa = temp_file("det_a.ckpt"), pb = temp_file("det_b.ckpt");
    save_model(pa, *a.model, 0xabc);
    save_model(pb, *b.model, 0xabc);
    EXPECT_EQ(slurp(pa), slurp(pb));
    const TrainResult other = train(cfg, small_corpus(), tc, 22);
    EXPECT_FALSE(a.model->params().same_values(other.model->params()));
  }
}

TEST(Train, CheckpointRoundTrip) {
  TrainConfig tc;
  tc.epochs = 1;
  const auto& c = small_corpus();
  for (const auto& cfg : tiny_configs()) {
    const TrainResult r = train(cfg, c, tc, 23);
    const auto p = temp_file("round.ckpt");
    save_model(p, *r.model, 0x1234);
    std::uint64_t hash = 0;
    const auto back = load_model(p, &hash);
    EXPECT_EQ(hash, 0x1234u);
    EXPECT_EQ(back->config(), r.model->config());
    EXPECT_EQ(back->domain(), r.model->domain());
    EXPECT_TRUE(back->params().same_values(r.model->params()));
    const Context ctx = context_for(c.test[2]);
    EXPECT_EQ(back->log_likelihood(ctx, c.test[2].tokens),
              r.model->log_likelihood(ctx, c.test[2].tokens));
    EXPECT_EQ(back->generate(ctx, {}), r.model->generate(ctx, {}));
  }
}

TEST(Train, LearnsTheSmallCorpus) {
  TrainConfig tc;
  tc.epochs = 6;
  const auto& c = small_corpus();
  ModelConfig cfg = tiny(Architecture::kTransformer);
  cfg.embedding = 16;
  cfg.hidden = 32;
  const TrainResult r = train(cfg, c, tc, 31);
  const UnigramModel unigram(c.vocab, c.train);
  EXPECT_LT(corpus_perplexity(*r.model, c.validation), corpus_perplexity(unigram, c.validation));
  EXPECT_LT(r.epochs.back().validation.nll, r.epochs.front().validation.nll);
}

TEST(Train, RejectsBadConfig) {
  TrainConfig tc;
  tc.batch_size = 0;
  EXPECT_THROW(tc.validate(), Error);
  tc = {};
  tc.lambda = -1.0;
  EXPECT_THROW(tc.validate(), Error);
  corpus::Corpus empty = small_corpus();
  empty.train.clear();
  EXPECT_THROW(train(tiny(Architecture::kRecurrent), empty, {}, 1), Error);
}

TEST(Oracle, ReproducesGroundTruth) {
  const auto& c = small_corpus();
  const OracleModel oracle(c.truth, c.vocab.size());
  for (const auto& r : c.test) {
    EXPECT_EQ(oracle.predict_rating(r.user, r.item), r.rating);
    EXPECT_EQ(oracle.gold(r.user, r.item), r.tokens);
    auto expect = r.tokens;
    expect.emplace_back(corpus::Vocab::kEosToken);
    const auto out = oracle.generate(context_for(r), {});
    EXPECT_EQ(out, expect);
    EXPECT_LE(perplexity(oracle, context_for(r), strip_eos(out)), 1.01);
  }
}

TEST(Oracle, PrefersGoldOverAnyOtherText) {
  const auto& c = small_corpus();
  const OracleModel oracle(c.truth, c.vocab.size());
  const auto& r = c.test[0];
  const double gold = oracle.log_likelihood(context_for(r), r.tokens);
  for (const auto& other : c.train) {
    if (other.tokens == r.tokens) continue;
    EXPECT_LT(oracle.log_likelihood(context_for(r), other.tokens), gold);
  }
}

TEST(Uniform, PerplexityIsVocabularySize) {
  const std::vector<std::string> text = {"the", "food", "was", "good"};
  for (const std::size_t v : {2u, 50u, 1000u}) {
    const UniformScorer u(v);
    EXPECT_NEAR(perplexity(u, {0, 0, {}}, text) / static_cast<double>(v), 1.0, 1e-9);
  }
}

TEST(RandomScorer, RepeatableAndUniform) {
  const RandomScorer r(99);
  const std::vector<std::string> a = {"the", "food", "was", "good"};
  EXPECT_EQ(r.log_likelihood({1, 2, {}}, a), r.log_likelihood({1, 2, {}}, a));
  EXPECT_NE(r.log_likelihood({1, 2, {}}, a), r.log_likelihood({1, 3, {}}, a));
  // Chi-square over ten equal bins; 21.67 is the 0.99 quantile at 9 dof.
  std::vector<double> bins(10, 0.0);
  constexpr int kN = 10000;
  for (int n = 0; n < kN; ++n) {
    const std::vector<std::string> text = {"w" + std::to_string(n)};
    const double d = r.draw(n % 7, n % 5, text);
    ASSERT_GE(d, 0.0);
    ASSERT_LT(d, RandomScorer::kMaxNats);
    bins[static_cast<std::size_t>(d / RandomScorer::kMaxNats * 10.0)] += 1.0;
  }
  double chi2 = 0.0;
  for (const double b : bins) chi2 += (b - kN / 10.0) * (b - kN / 10.0) / (kN / 10.0);
  EXPECT_LT(chi2, 21.67);
}

TEST(Baselines, UnigramAndMeanRating) {
  const auto& c = small_corpus();
  const UnigramModel u(c.vocab, c.train);
  double total = 0.0;
  for (const auto& t : c.vocab.tokens()) {
    if (c.vocab.id(t) >= corpus::Vocab::kReserved || t == corpus::Vocab::kEosToken) {
      total += u.probability(t);
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  const double mean = mean_rating(c.train);
  EXPECT_EQ(u.predict_rating(0, 0), mean);
  EXPECT_DOUBLE_EQ(constant_rmse(mean, c.test), model_rmse(u, c.test));
}

TEST(Generation, SerialEqualsParallelAndRoundTrips) {
  const auto& c = small_corpus();
  const auto m = NeuralRecommender::create(tiny(Architecture::kTransformer),
                                           ModelDomain::from_corpus(c), 8);
  const auto par = generate_explanations(*m, c.test, {}, true);
  const auto ser = generate_explanations(*m, c.test, {}, false);
  EXPECT_EQ(par, ser);
  ASSERT_EQ(par.size(), c.test.size());
  const auto p = temp_file("gens.tsv");
  save_generations(p, par);
  EXPECT_EQ(load_generations(p), par);
  EXPECT_THROW(parse_generations("1\t2\n", "bad"), Error);
}

}  // namespace
}  // namespace revexp::models
