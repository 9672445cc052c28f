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
#include <span>
#include <vector>

#include "revexp/corpus/lexicon.hpp"
#include "revexp/corpus/review.hpp"
#include "revexp/metrics/result.hpp"
#include "revexp/models/generation.hpp"
#include "revexp/models/recommender.hpp"
#include "revexp/perturb/perturb.hpp"

namespace revexp::metrics {

struct RankingOptions {
  Execution execution = Execution::kParallel;
  bool audit = false;
};

// Text whose negation is ranked against it.
struct AirInstance {
  std::size_t id = 0;
  models::Context context;
  corpus::Tokens text;
};

// Reviews rated 4 or 5 with their own text. `id` indexes `reviews`.
std::vector<AirInstance> air_pool(std::span<const corpus::Review> reviews);
// Same pool, but each text is the model's explanation for that review.
std::vector<AirInstance> air_pool_generated(std::span<const corpus::Review> reviews,
                                            std::span<const models::Generation> generations);

// Ties count as invariant.
inline bool air_flipped(double ppl_original, double ppl_negated) {
  return ppl_negated < ppl_original;
}

MetricResult air(const models::ExplainableRecommender& model,
                 std::span<const AirInstance> instances, const perturb::Negator& negator,
                 const RankingOptions& options = {});

// Gold text first, then k aspect-substituted candidates.
struct MrrInstance {
  std::size_t gold = 0;
  std::vector<std::size_t> candidates;
  std::vector<corpus::Tokens> texts;
};

// Candidates are sampled per gold review from `reviews` with a seed derived
// from `seed` and the gold index. A candidate is rejected when its
// substituted text repeats the gold text or an earlier candidate.
std::vector<MrrInstance> build_mrr_instances(std::span<const corpus::Review> reviews,
                                             const corpus::Lexicon& lexicon, std::size_t k,
                                             std::uint64_t seed, std::size_t max_instances = 0,
                                             Execution execution = Execution::kParallel);

// 1 + number of candidates scored at most as well as the gold text.
std::size_t gold_rank(double gold_ppl, std::span<const double> candidate_ppls);

MetricResult mrr_ae(const models::ExplainableRecommender& model,
                    std::span<const corpus::Review> reviews,
                    std::span<const MrrInstance> instances, const RankingOptions& options = {});

// 100 * H(n) / n: expected reciprocal rank of a uniformly random rank among n.
double random_mrr(std::size_t n);

}  // namespace revexp::metrics
