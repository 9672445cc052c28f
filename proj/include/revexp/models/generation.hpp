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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "revexp/corpus/review.hpp"
#include "revexp/corpus/text.hpp"
#include "revexp/models/recommender.hpp"

namespace revexp::models {

struct Generation {
  int user = 0;
  int item = 0;
  double predicted_rating = 0.0;
  // Words without the trailing EOS; may be empty.
  corpus::Tokens words;
  friend bool operator==(const Generation&, const Generation&) = default;
};

// One explanation per review, in input order. Conditioned models get the
// review's gold aspect.
std::vector<Generation> generate_explanations(const ExplainableRecommender& model,
                                              std::span<const corpus::Review> reviews,
                                              const DecodeOptions& options, bool parallel = true);

// user<TAB>item<TAB>predicted_rating<TAB>generated_text per line.
std::string serialize_generations(std::span<const Generation> generations);
std::vector<Generation> parse_generations(std::string_view text, const std::string& source);
void save_generations(const std::filesystem::path& path, std::span<const Generation> generations);
std::vector<Generation> load_generations(const std::filesystem::path& path);

}  // namespace revexp::models
