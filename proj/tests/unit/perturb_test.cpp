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
#include <set>

#include "gtest/gtest.h"
#include "revexp/corpus/analysis.hpp"
#include "revexp/corpus/corpus.hpp"
#include "revexp/corpus/text.hpp"
#include "revexp/error.hpp"
#include "revexp/perturb/perturb.hpp"

namespace revexp::perturb {
namespace {

using corpus::Lexicon;
using corpus::Polarity;
using corpus::tokenize;

const Lexicon& lex() { return Lexicon::default_lexicon(); }

const corpus::Corpus& test_corpus() {
  static const corpus::Corpus c =
      corpus::build_corpus(corpus::generate_world(120, 60, 8, 3), 30, {}, 4);
  return c;
}

TEST(Negation, MotivatingSentence) {
  const auto out = negate_sentiment(tokenize("i love this hotel because it has great service"),
                                    lex());
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->perturbed, tokenize("i hate this hotel because it has terrible service"));
  EXPECT_EQ(out->touched, (std::vector<std::size_t>{1, 7}));
  EXPECT_EQ(out->kind, PerturbKind::kSentimentNegation);
}

TEST(Negation, NegatorIsRemoved) {
  const auto out = negate_sentiment(tokenize("the service was not great"), lex());
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->perturbed, tokenize("the service was great"));
  EXPECT_EQ(out->touched, (std::vector<std::size_t>{3}));
}

TEST(Negation, UnperturbableWithoutOpinion) {
  EXPECT_FALSE(negate_sentiment(tokenize("the service was okay"), lex()).has_value());
  EXPECT_FALSE(negate_sentiment({}, lex()).has_value());
}

TEST(Negation, SoundAndStableOnPositiveReviews) {
  std::size_t positive = 0;
  for (const auto& r : test_corpus().test) {
    if (r.polarity != Polarity::kPositive) continue;
    ++positive;
    const auto once = negate_sentiment(r.tokens, lex());
    ASSERT_TRUE(once.has_value()) << corpus::join(r.tokens);
    EXPECT_EQ(corpus::classify_polarity(once->perturbed, lex()), Polarity::kNegative);
    EXPECT_NE(once->perturbed, r.tokens);
    const auto twice = negate_sentiment(once->perturbed, lex());
    ASSERT_TRUE(twice.has_value());
    EXPECT_EQ(corpus::classify_polarity(twice->perturbed, lex()), Polarity::kPositive);
  }
  EXPECT_GT(positive, 50u);
}

TEST(Negation, LexiconNegatorDelegates) {
  const LexiconNegator n(lex());
  const auto t = tokenize("i love the food");
  EXPECT_EQ(n.negate(t)->perturbed, negate_sentiment(t, lex())->perturbed);
  EXPECT_EQ(n.name(), "lexicon");
}

TEST(Substitution, ReplacesAspect) {
  const auto out = substitute_aspect(tokenize("the battery was great"), "service", lex());
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->perturbed, tokenize("the service was great"));
  EXPECT_EQ(out->touched, (std::vector<std::size_t>{1}));
  EXPECT_EQ(out->kind, PerturbKind::kAspectSubstitution);
}

TEST(Substitution, FixedPointAndErrors) {
  const auto same = substitute_aspect(tokenize("the service was great"), "service", lex());
  ASSERT_TRUE(same.has_value());
  EXPECT_EQ(same->perturbed, same->original);
  EXPECT_TRUE(same->touched.empty());
  EXPECT_FALSE(substitute_aspect(tokenize("i love it"), "service", lex()).has_value());
  EXPECT_THROW(substitute_aspect(tokenize("the service was great"), "great", lex()), Error);
}

TEST(Substitution, ClosureOnCorpus) {
  for (const auto& r : test_corpus().test) {
    const auto out = substitute_aspect(r.tokens, "battery", lex());
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(corpus::extract_aspect(out->perturbed, lex()), "battery");
    for (std::size_t k = 0; k < r.tokens.size(); ++k) {
      if (out->perturbed[k] != r.tokens[k]) EXPECT_TRUE(lex().is_aspect(r.tokens[k]));
    }
  }
}

TEST(Sampler, DistinctDeterministicAndExcludesGold) {
  const auto& pool = test_corpus().test;
  ASSERT_GE(pool.size(), 300u);
  const std::size_t gold = 17;
  const auto a = sample_candidates(pool, gold, 100, 5);
  const auto b = sample_candidates(pool, gold, 100, 5);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 100u);
  EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 100u);
  for (const auto i : a) {
    EXPECT_NE(i, gold);
    EXPECT_NE(pool[i].tokens, pool[gold].tokens);
  }
  EXPECT_NE(sample_candidates(pool, gold, 100, 6), a);
}

TEST(Sampler, SubstitutedCandidatesCarryGoldAspect) {
  const auto& pool = test_corpus().test;
  const std::size_t gold = 3;
  for (const auto i : sample_candidates(pool, gold, 100, 9)) {
    const auto out = substitute_aspect(pool[i].tokens, pool[gold].aspect, lex());
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(corpus::extract_aspect(out->perturbed, lex()), pool[gold].aspect);
  }
}

TEST(Sampler, ExhaustiveAndErrors) {
  std::vector<corpus::Review> pool(6);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i].tokens = {"w" + std::to_string(i)};
  auto all = sample_candidates(pool, 2, 5, 1);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (std::vector<std::size_t>{0, 1, 3, 4, 5}));
  EXPECT_THROW(sample_candidates(pool, 2, 6, 1), Error);
  EXPECT_THROW(sample_candidates(pool, 2, 0, 1), Error);
  pool[4].tokens = pool[2].tokens;
  EXPECT_THROW(sample_candidates(pool, 2, 5, 1), Error);
  const auto odd = sample_candidates(pool, 2, 2, 1, [](const corpus::Review& r) {
    return r.tokens[0] == "w1" || r.tokens[0] == "w5";
  });
  EXPECT_EQ(std::set<std::size_t>(odd.begin(), odd.end()), (std::set<std::size_t>{1, 5}));
}

}  // namespace
}  // namespace revexp::perturb
