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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revexp/corpus/lexicon.hpp"
#include "revexp/corpus/review.hpp"
#include "revexp/corpus/text.hpp"

namespace revexp::perturb {

enum class PerturbKind { kSentimentNegation, kAspectSubstitution };

std::string_view kind_name(PerturbKind k);

struct PerturbedPair {
  corpus::Tokens original;
  corpus::Tokens perturbed;
  PerturbKind kind = PerturbKind::kSentimentNegation;
  // Positions in `original` that were replaced or removed.
  std::vector<std::size_t> touched;
};

// Flips every opinion term to its antonym, or drops the negator in front of
// it. nullopt when the text has no opinion term.
std::optional<PerturbedPair> negate_sentiment(std::span<const std::string> tokens,
                                              const corpus::Lexicon& lexicon);

// Replaces every aspect term with `target`. nullopt when the text has none.
std::optional<PerturbedPair> substitute_aspect(std::span<const std::string> tokens,
                                               const std::string& target,
                                               const corpus::Lexicon& lexicon);

// Pluggable rewriter used by the invariance metric.
class Negator {
 public:
  virtual ~Negator() = default;
  virtual std::string name() const = 0;
  virtual std::optional<PerturbedPair> negate(std::span<const std::string> tokens) const = 0;
};

class LexiconNegator final : public Negator {
 public:
  explicit LexiconNegator(const corpus::Lexicon& lexicon) : lexicon_(lexicon) {}
  std::string name() const override { return "lexicon"; }
  std::optional<PerturbedPair> negate(std::span<const std::string> tokens) const override {
    return negate_sentiment(tokens, lexicon_);
  }

 private:
  const corpus::Lexicon& lexicon_;
};

// Extra rejection rule applied on top of the built-in exclusions.
using CandidateFilter = std::function<bool(const corpus::Review& candidate)>;

// k distinct indices into `pool`, never `gold` and never a review whose text
// equals the gold text. Deterministic in `seed`.
std::vector<std::size_t> sample_candidates(std::span<const corpus::Review> pool, std::size_t gold,
                                           std::size_t k, std::uint64_t seed,
                                           const CandidateFilter& keep = {});

}  // namespace revexp::perturb
