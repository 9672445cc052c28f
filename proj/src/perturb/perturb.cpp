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

#include "revexp/perturb/perturb.hpp"

#include <numeric>

#include "revexp/error.hpp"
#include "revexp/rng.hpp"

namespace revexp::perturb {

std::string_view kind_name(PerturbKind k) {
  return k == PerturbKind::kSentimentNegation ? "sentiment-negation" : "aspect-substitution";
}

std::optional<PerturbedPair> negate_sentiment(std::span<const std::string> tokens,
                                              const corpus::Lexicon& lexicon) {
  PerturbedPair p;
  p.kind = PerturbKind::kSentimentNegation;
  p.original.assign(tokens.begin(), tokens.end());
  bool found = false;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const bool negator_next = tokens[t] == lexicon.negator() && t + 1 < tokens.size() &&
                              lexicon.opinion_polarity(tokens[t + 1]).has_value();
    if (negator_next) {
      p.touched.push_back(t);
      p.perturbed.push_back(tokens[t + 1]);
      found = true;
      ++t;
      continue;
    }
    if (auto ant = lexicon.antonym(tokens[t])) {
      p.touched.push_back(t);
      p.perturbed.push_back(*ant);
      found = true;
      continue;
    }
    p.perturbed.push_back(tokens[t]);
  }
  if (!found) return std::nullopt;
  return p;
}

std::optional<PerturbedPair> substitute_aspect(std::span<const std::string> tokens,
                                               const std::string& target,
                                               const corpus::Lexicon& lexicon) {
  if (!lexicon.is_aspect(target)) throw Error("'" + target + "' is not a lexicon aspect");
  PerturbedPair p;
  p.kind = PerturbKind::kAspectSubstitution;
  p.original.assign(tokens.begin(), tokens.end());
  p.perturbed = p.original;
  bool found = false;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (!lexicon.is_aspect(tokens[t])) continue;
    found = true;
    if (tokens[t] != target) {
      p.perturbed[t] = target;
      p.touched.push_back(t);
    }
  }
  if (!found) return std::nullopt;
  return p;
}

std::vector<std::size_t> sample_candidates(std::span<const corpus::Review> pool, std::size_t gold,
                                           std::size_t k, std::uint64_t seed,
                                           const CandidateFilter& keep) {
  if (k == 0) throw Error("candidate count must be at least 1");
  if (gold >= pool.size()) throw Error("gold index outside the candidate pool");
  if (pool.size() <= k) {
    throw Error("pool of " + std::to_string(pool.size()) + " reviews cannot supply " +
                std::to_string(k) + " candidates");
  }
  const auto& gold_tokens = pool[gold].tokens;
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::vector<std::size_t> out;
  out.reserve(k);
  // Incremental Fisher-Yates: position `next` receives a uniform draw from
  // the not yet visited suffix.
  for (std::size_t next = 0; next < order.size() && out.size() < k; ++next) {
    const std::size_t j = next + rng.below(order.size() - next);
    std::swap(order[next], order[j]);
    const std::size_t c = order[next];
    if (c == gold || pool[c].tokens == gold_tokens) continue;
    if (keep && !keep(pool[c])) continue;
    out.push_back(c);
  }
  if (out.size() < k) {
    throw Error("only " + std::to_string(out.size()) + " distinct candidates available, " +
                std::to_string(k) + " requested");
  }
  return out;
}

}  // namespace revexp::perturb
