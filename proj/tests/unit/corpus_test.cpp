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

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "gtest/gtest.h"
#include "revexp/corpus/analysis.hpp"
#include "revexp/corpus/corpus.hpp"
#include "revexp/corpus/text.hpp"
#include "revexp/error.hpp"

namespace revexp::corpus {
namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("revexp_corpus_" + name);
}

const Corpus& default_corpus() {
  static const Corpus c = build_corpus(generate_world(200, 100, 8, 1), 40, {}, 2);
  return c;
}

TEST(Lexicon, DefaultIsLargeEnoughAndInvolutive) {
  const Lexicon& lex = Lexicon::default_lexicon();
  EXPECT_GE(lex.aspects().size(), 12u);
  EXPECT_GE(lex.opinions().size(), 10u);
  for (const auto& p : lex.opinions()) {
    EXPECT_EQ(lex.antonym(*lex.antonym(p.positive)), p.positive);
    EXPECT_EQ(lex.antonym(*lex.antonym(p.negative)), p.negative);
    EXPECT_FALSE(lex.is_aspect(p.positive));
    EXPECT_FALSE(lex.is_aspect(p.negative));
  }
  EXPECT_EQ(lex.negator(), "not");
}

TEST(Lexicon, ParseErrorsAndExtension) {
  EXPECT_THROW(Lexicon::from_string("aspect service\nopinion service bad\n"), Error);
  EXPECT_THROW(Lexicon::from_string("opinion good good\n"), Error);
  EXPECT_THROW(Lexicon::from_string("flavour sweet\n"), Error);
  const Lexicon ext =
      Lexicon::from_string(Lexicon::default_lexicon().serialize() + "aspect pool\n");
  EXPECT_TRUE(ext.is_aspect("pool"));
  EXPECT_EQ(Lexicon::from_string(ext.serialize()).serialize(), ext.serialize());
}

TEST(World, SingleUserItem) {
  const SyntheticWorld w = generate_world(1, 1, 1, 7);
  EXPECT_EQ(w.dominant_aspect[0], 0);
}

TEST(World, Deterministic) {
  EXPECT_EQ(generate_world(20, 10, 5, 3), generate_world(20, 10, 5, 3));
  EXPECT_FALSE(generate_world(20, 10, 5, 3) == generate_world(20, 10, 5, 4));
}

TEST(World, PreferenceMeanNearHalf) {
  const SyntheticWorld w = generate_world(200, 100, 8, 1);
  double sum = 0;
  for (const auto& row : w.preferences)
    for (const double v : row) sum += v;
  const double mean = sum / 1600.0;
  EXPECT_GE(mean, 0.45);
  EXPECT_LE(mean, 0.55);
}

TEST(World, TooManyAspectsIsAnError) {
  EXPECT_THROW(generate_world(1, 1, 99, 1), Error);
  EXPECT_THROW(generate_world(0, 1, 1, 1), Error);
}

TEST(World, DominantAspectTieTakesLowestIndex) {
  SyntheticWorld w = generate_world(1, 1, 3, 1);
  w.qualities[0] = {0.2, 0.9, 0.9};
  save_world(temp_file("tie.world"), w);
  EXPECT_EQ(load_world(temp_file("tie.world"), w.lexicon).dominant_aspect[0], 1);
}

TEST(RenderReview, Boundaries) {
  const Lexicon& lex = Lexicon::default_lexicon();
  SyntheticWorld w = generate_world(1, 1, 4, 5);
  w.preferences[0] = {1, 1, 1, 1};
  w.qualities[0] = {1, 1, 1, 1};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Review r = render_review(w, 0, 0, s);
    EXPECT_EQ(r.rating, 5);
    EXPECT_EQ(classify_polarity(r.tokens, lex), Polarity::kPositive);
  }
  w.preferences[0] = {0, 0, 0, 0};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Review r = render_review(w, 0, 0, s);
    EXPECT_EQ(r.rating, 1);
    EXPECT_EQ(classify_polarity(r.tokens, lex), Polarity::kNegative);
  }
}

TEST(RenderReview, RatingMatchesIndependentAffinity) {
  const SyntheticWorld w = generate_world(5, 5, 8, 1);
  const Review r = render_review(w, 0, 0, 0);
  double dot = 0;
  for (int k = 0; k < 8; ++k) dot += w.preferences[0][k] * w.qualities[0][k];
  double a = 0.5 + 2.0 * std::sqrt(8.0) * (dot / 8.0 - 0.25);
  a = a < 0 ? 0 : (a > 1 ? 1 : a);
  EXPECT_EQ(r.rating, 1 + static_cast<int>(std::floor(4 * a + 0.5)));
  EXPECT_EQ(r.aspect, w.aspect_term(w.dominant_aspect[0]));
}

TEST(RenderReview, RatingsCoverAllBands) {
  std::array<int, 6> counts{};
  for (const auto& r : default_corpus().train) ++counts[static_cast<std::size_t>(r.rating)];
  const double n = static_cast<double>(default_corpus().train.size());
  for (int rating = 1; rating <= 5; ++rating) EXPECT_GT(counts[rating] / n, 0.1) << rating;
}

TEST(BuildCorpus, SplitSizes) {
  const Corpus c = build_corpus(generate_world(250, 100, 8, 3), 40, {0.8, 0.1, 0.1}, 4);
  EXPECT_EQ(c.size(), 10000u);
  EXPECT_NEAR(static_cast<double>(c.train.size()), 8000, 80);
  EXPECT_NEAR(static_cast<double>(c.validation.size()), 1000, 40);
  EXPECT_NEAR(static_cast<double>(c.test.size()), 1000, 40);
}

TEST(BuildCorpus, HeldOutUsersAndItemsAppearInTrain) {
  const Corpus& c = default_corpus();
  std::set<int> users, items;
  for (const auto& r : c.train) {
    users.insert(r.user);
    items.insert(r.item);
  }
  for (const auto* split : {&c.validation, &c.test}) {
    for (const auto& r : *split) {
      EXPECT_TRUE(users.contains(r.user));
      EXPECT_TRUE(items.contains(r.item));
    }
  }
}

TEST(BuildCorpus, RepairsItemCoverageOnSparseWorlds) {
  const Corpus c = build_corpus(generate_world(30, 200, 6, 9), 5, {0.6, 0.2, 0.2}, 9);
  std::set<int> items;
  for (const auto& r : c.train) items.insert(r.item);
  for (const auto& r : c.test) EXPECT_TRUE(items.contains(r.item));
}

TEST(BuildCorpus, TestOovRateBelowOnePercent) {
  const Corpus& c = default_corpus();
  std::size_t total = 0, oov = 0;
  for (const auto& r : c.test) {
    for (const auto& t : r.tokens) {
      ++total;
      oov += c.vocab.contains(t) ? 0 : 1;
    }
  }
  EXPECT_LT(static_cast<double>(oov) / static_cast<double>(total), 0.01);
}

TEST(BuildCorpus, CoverageImpossibleNamesUser) {
  try {
    build_corpus(generate_world(3, 5, 2, 1), 1, {}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("user 0"), std::string::npos);
  }
  EXPECT_THROW(build_corpus(generate_world(3, 5, 2, 1), 4, {0.5, 0.5, 0.0}, 1), Error);
  EXPECT_THROW(build_corpus(generate_world(3, 5, 2, 1), 6, {}, 1), Error);
}

TEST(BuildCorpus, ReviewInvariants) {
  const Corpus& c = default_corpus();
  const Lexicon& lex = Lexicon::default_lexicon();
  for (const auto* split : {&c.train, &c.validation, &c.test}) {
    for (const auto& r : *split) {
      EXPECT_EQ(r.polarity, polarity_for_rating(r.rating));
      EXPECT_EQ(extract_aspect(r.tokens, lex), r.aspect);
      if (r.polarity != Polarity::kNeutral) EXPECT_EQ(classify_polarity(r.tokens, lex), r.polarity);
      const auto ids = c.vocab.encode(r.tokens, true);
      EXPECT_EQ(ids.back(), Vocab::kEos);
    }
  }
  for (const auto& r : c.train) {
    for (const int id : c.vocab.encode(r.tokens, false)) EXPECT_NE(id, Vocab::kUnk);
  }
}

TEST(BuildCorpus, SavedFilesAreByteIdentical) {
  const auto make = [] {
    return serialize_corpus(build_corpus(generate_world(30, 20, 8, 5), 6, {}, 6));
  };
  EXPECT_EQ(make(), make());
}

TEST(CorpusFile, RoundTrip) {
  const Corpus c = build_corpus(generate_world(20, 15, 6, 8), 5, {0.6, 0.2, 0.2}, 8);
  ASSERT_EQ(c.size(), 100u);
  const auto path = temp_file("roundtrip.tsv");
  save_corpus(c, path);
  const Corpus back = load_corpus(path);
  EXPECT_TRUE(back.same_content(c));
  EXPECT_EQ(back.truth, nullptr);
}

TEST(CorpusFile, RejectsRatingOutOfRangeWithLineNumber) {
  const std::string text =
      "0\t0\t5\tservice\tpositive\ttrain\tthe service was great\n"
      "0\t1\t6\tfood\tpositive\ttrain\tthe food was great\n";
  try {
    parse_corpus(text, "f.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_corpus("0\t0\t5\tservice\tpositive\ttrain\n"), Error);
  EXPECT_THROW(parse_corpus("0\t0\t2\tservice\tpositive\ttrain\tthe service was bad\n"), Error);
  EXPECT_THROW(parse_corpus("0\tx\t2\tservice\tnegative\ttrain\tthe service was bad\n"), Error);
}

TEST(CorpusFile, HandWrittenFixture) {
  const std::string text =
      "0\t0\t5\tservice\tpositive\ttrain\tThe service was great\n"
      "1\t0\t2\tservice\tnegative\ttrain\ti hate the service\n"
      "1\t0\t3\tservice\tneutral\ttest\tthe service was okay\n";
  const Corpus c = parse_corpus(text);
  ASSERT_EQ(c.train.size(), 2u);
  ASSERT_EQ(c.test.size(), 1u);
  EXPECT_EQ(c.train[0].tokens, (Tokens{"the", "service", "was", "great"}));
  EXPECT_EQ(c.train[1].user, 1);
  EXPECT_EQ(c.train[1].rating, 2);
  EXPECT_EQ(c.train[1].polarity, Polarity::kNegative);
  EXPECT_EQ(c.test[0].aspect, "service");
  EXPECT_EQ(c.vocab.size(), 4u + 6u);
  EXPECT_EQ(c.vocab.token(Vocab::kEos), "<eos>");
}

TEST(Analysis, ExtractAspect) {
  const Lexicon& lex = Lexicon::default_lexicon();
  EXPECT_EQ(extract_aspect(tokenize("the service was great"), lex), "service");
  EXPECT_EQ(extract_aspect(tokenize("good morning"), lex), std::nullopt);
}

TEST(Analysis, ClassifyPolarity) {
  const Lexicon& lex = Lexicon::default_lexicon();
  EXPECT_EQ(classify_polarity(tokenize("the service was great"), lex), Polarity::kPositive);
  EXPECT_EQ(classify_polarity(tokenize("the service was not great"), lex), Polarity::kNegative);
  EXPECT_EQ(classify_polarity(tokenize("great food but rude staff"), lex), Polarity::kNeutral);
  EXPECT_EQ(classify_polarity(tokenize("the room was okay"), lex), Polarity::kNeutral);
}

}  // namespace
}  // namespace revexp::corpus
