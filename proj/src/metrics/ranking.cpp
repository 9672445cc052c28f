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

#include "revexp/metrics/ranking.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "revexp/error.hpp"
#include "revexp/rng.hpp"

namespace revexp::metrics {

std::string_view direction_arrow(Direction d) {
  return d == Direction::kHigherBetter ? "↑" : "↓";
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<AirInstance> air_pool(std::span<const corpus::Review> reviews) {
  std::vector<AirInstance> pool;
  for (std::size_t k = 0; k < reviews.size(); ++k) {
    const corpus::Review& r = reviews[k];
    if (r.rating < 4) continue;
    pool.push_back({k, models::Context{r.user, r.item, r.aspect}, r.tokens});
  }
  return pool;
}

std::vector<AirInstance> air_pool_generated(std::span<const corpus::Review> reviews,
                                            std::span<const models::Generation> generations) {
  if (generations.size() > reviews.size()) throw Error("more generations than reviews");
  std::vector<AirInstance> pool;
  for (std::size_t k = 0; k < generations.size(); ++k) {
    const corpus::Review& r = reviews[k];
    const models::Generation& g = generations[k];
    if (g.user != r.user || g.item != r.item) {
      throw Error("generation " + std::to_string(k) + " does not match its review");
    }
    if (r.rating < 4) continue;
    pool.push_back({k, models::Context{r.user, r.item, r.aspect}, g.words});
  }
  return pool;
}

MetricResult air(const models::ExplainableRecommender& model,
                 std::span<const AirInstance> instances, const perturb::Negator& negator,
                 const RankingOptions& options) {
  enum Outcome : int { kExcluded, kInvariant, kFlipped };
  std::vector<int> outcome(instances.size(), kExcluded);
  std::vector<double> ppl_orig(instances.size(), 0.0), ppl_neg(instances.size(), 0.0);
  for_each_instance(instances.size(), options.execution, [&](std::size_t k) {
    const AirInstance& inst = instances[k];
    if (inst.text.empty()) return;
    const auto neg = negator.negate(inst.text);
    if (!neg) return;
    const std::vector<corpus::Tokens> texts{inst.text, neg->perturbed};
    const std::vector<double> p = models::perplexities(model, inst.context, texts);
    ppl_orig[k] = p[0];
    ppl_neg[k] = p[1];
    outcome[k] = air_flipped(p[0], p[1]) ? kFlipped : kInvariant;
  });

  MetricResult res;
  res.name = "AIR";
  res.direction = Direction::kHigherBetter;
  res.config = "negator=" + negator.name();
  std::size_t flipped = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    if (outcome[k] == kExcluded) {
      ++res.excluded;
    } else {
      ++res.samples;
      if (outcome[k] == kFlipped) ++flipped;
    }
    if (options.audit) {
      const AirInstance& inst = instances[k];
      std::string line = "AIR\t" + std::to_string(inst.id) + "\t" +
                         std::to_string(inst.context.user) + "\t" +
                         std::to_string(inst.context.item) + "\t";
      if (outcome[k] == kExcluded) {
        line += "excluded";
      } else {
        line += exact(ppl_orig[k]) + "\t" + exact(ppl_neg[k]) + "\t" +
                (outcome[k] == kFlipped ? "1" : "0");
      }
      res.audit.push_back(std::move(line));
    }
  }
  if (res.samples == 0) throw Error("empty AIR pool");
  res.value = 100.0 * (1.0 - static_cast<double>(flipped) / static_cast<double>(res.samples));
  return res;
}

std::vector<MrrInstance> build_mrr_instances(std::span<const corpus::Review> reviews,
                                             const corpus::Lexicon& lexicon, std::size_t k,
                                             std::uint64_t seed, std::size_t max_instances,
                                             Execution execution) {
  const std::size_t n =
      max_instances == 0 ? reviews.size() : std::min(max_instances, reviews.size());
  std::vector<MrrInstance> out(n);
  for_each_instance(n, execution, [&](std::size_t g) {
    const corpus::Review& gold = reviews[g];
    const bool substitutable = lexicon.is_aspect(gold.aspect);
    auto rewrite = [&](const corpus::Tokens& t) {
      if (!substitutable) return t;
      auto p = perturb::substitute_aspect(t, gold.aspect, lexicon);
      return p ? p->perturbed : t;
    };
    std::set<corpus::Tokens> seen{gold.tokens};
    MrrInstance& inst = out[g];
    inst.gold = g;
    inst.texts.push_back(gold.tokens);
    const perturb::CandidateFilter keep = [&](const corpus::Review& c) {
      corpus::Tokens t = rewrite(c.tokens);
      if (!seen.insert(t).second) return false;
      inst.texts.push_back(std::move(t));
      return true;
    };
    inst.candidates = perturb::sample_candidates(reviews, g, k, derive_seed(seed, g), keep);
  });
  return out;
}

std::size_t gold_rank(double gold_ppl, std::span<const double> candidate_ppls) {
  std::size_t rank = 1;
  for (const double p : candidate_ppls) {
    if (p <= gold_ppl) ++rank;
  }
  return rank;
}

MetricResult mrr_ae(const models::ExplainableRecommender& model,
                    std::span<const corpus::Review> reviews,
                    std::span<const MrrInstance> instances, const RankingOptions& options) {
  if (instances.empty()) throw Error("no MRR-AE instances");
  std::vector<std::size_t> rank(instances.size(), 0);
  std::vector<std::vector<double>> ppl(options.audit ? instances.size() : 0);
  for_each_instance(instances.size(), options.execution, [&](std::size_t k) {
    const MrrInstance& inst = instances[k];
    const corpus::Review& gold = reviews[inst.gold];
    std::vector<double> p = models::perplexities(
        model, models::Context{gold.user, gold.item, gold.aspect}, inst.texts);
    rank[k] = gold_rank(p[0], std::span<const double>(p).subspan(1));
    if (options.audit) ppl[k] = std::move(p);
  });

  MetricResult res;
  res.name = "MRR-AE";
  res.direction = Direction::kHigherBetter;
  res.config = "k=" + std::to_string(instances.front().candidates.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    sum += 1.0 / static_cast<double>(rank[k]);
    if (options.audit) {
      const MrrInstance& inst = instances[k];
      const corpus::Review& gold = reviews[inst.gold];
      std::string line = "MRR-AE\t" + std::to_string(inst.gold) + "\t" +
                         std::to_string(gold.user) + "\t" + std::to_string(gold.item) + "\t" +
                         std::to_string(rank[k]) + "\t" + exact(ppl[k][0]) + "\t";
      for (std::size_t c = 1; c < ppl[k].size(); ++c) {
        if (c > 1) line += ',';
        line += exact(ppl[k][c]);
      }
      res.audit.push_back(std::move(line));
    }
  }
  res.samples = instances.size();
  res.value = 100.0 * (sum / static_cast<double>(instances.size()));
  return res;
}

double random_mrr(std::size_t n) {
  double h = 0.0;
  for (std::size_t r = n; r >= 1; --r) h += 1.0 / static_cast<double>(r);
  return 100.0 * h / static_cast<double>(n);
}

}  // namespace revexp::metrics
