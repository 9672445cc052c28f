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
#include <string>
#include <string_view>
#include <vector>

#include "revexp/corpus/review.hpp"
#include "revexp/corpus/vocab.hpp"
#include "revexp/corpus/world.hpp"

namespace revexp::corpus {

enum class Split { kTrain, kValidation, kTest };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

// Generator state needed to re-render any review of a synthetic corpus.
struct GroundTruth {
  SyntheticWorld world;
  std::uint64_t corpus_seed = 0;
};

struct Corpus {
  std::vector<Review> train;
  std::vector<Review> validation;
  std::vector<Review> test;
  Vocab vocab;
  // Absent for externally loaded corpora.
  std::shared_ptr<const GroundTruth> truth;

  const std::vector<Review>& split(Split s) const;
  std::size_t size() const { return train.size() + validation.size() + test.size(); }

  // Splits and vocabulary equal; the ground truth reference is not compared.
  bool same_content(const Corpus& other) const;
};

// Seed used to render the review of (user, item) in a corpus built with
// corpus_seed.
std::uint64_t render_seed(std::uint64_t corpus_seed, int user, int item);

// Each user reviews reviews_per_user distinct random items. Splits are
// stratified per user (every user appears in every split) and then repaired so
// every item seen in validation/test also appears in train. The vocabulary is
// built from the train split only.
Corpus build_corpus(const SyntheticWorld& world, int reviews_per_user, const SplitRatios& ratios,
                    std::uint64_t seed);

// One record per line:
// user<TAB>item<TAB>rating<TAB>aspect<TAB>polarity<TAB>split<TAB>text
std::string serialize_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view text, const std::string& source = "<memory>");

// FNV-1a of the serialized corpus, as 16 hex digits.
std::string corpus_fingerprint(const Corpus& corpus);

}  // namespace revexp::corpus
