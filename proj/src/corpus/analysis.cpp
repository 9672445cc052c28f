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

#include "revexp/corpus/analysis.hpp"

namespace revexp::corpus {

std::optional<std::string> extract_aspect(std::span<const std::string> tokens,
                                          const Lexicon& lexicon) {
  for (const auto& t : tokens) {
    if (lexicon.is_aspect(t)) return t;
  }
  return std::nullopt;
}

Polarity classify_polarity(std::span<const std::string> tokens, const Lexicon& lexicon) {
  int positive = 0, negative = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto p = lexicon.opinion_polarity(tokens[i]);
    if (!p) continue;
    const bool negated = i > 0 && tokens[i - 1] == lexicon.negator();
    if (negated) p = *p == Polarity::kPositive ? Polarity::kNegative : Polarity::kPositive;
    (*p == Polarity::kPositive ? positive : negative) += 1;
  }
  if (positive > negative) return Polarity::kPositive;
  if (negative > positive) return Polarity::kNegative;
  return Polarity::kNeutral;
}

}  // namespace revexp::corpus
