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

// Serial against OpenMP-parallel evaluation of the ranking metrics.

#include <memory>

#include "benchmark/benchmark.h"
#include "revexp/corpus/corpus.hpp"
#include "revexp/metrics/coherence.hpp"
#include "revexp/metrics/ranking.hpp"
#include "revexp/models/neural.hpp"
#include "revexp/perturb/perturb.hpp"

namespace {

using namespace revexp;

struct Fixture {
  corpus::Corpus corpus;
  std::unique_ptr<models::NeuralRecommender> model;
  std::vector<metrics::AirInstance> air_pool;
  std::vector<metrics::MrrInstance> mrr;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    x.corpus = corpus::build_corpus(corpus::generate_world(60, 40, 8, 3), 20, {}, 4);
    models::ModelConfig cfg;
    cfg.embedding = 32;
    cfg.hidden = 64;
    x.model = models::NeuralRecommender::create(cfg, models::ModelDomain::from_corpus(x.corpus), 5);
    x.air_pool = metrics::air_pool(x.corpus.test);
    x.mrr = metrics::build_mrr_instances(x.corpus.test, x.corpus.truth->world.lexicon, 20, 6, 40);
    return x;
  }();
  return f;
}

metrics::Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? metrics::Execution::kSerial : metrics::Execution::kParallel;
}

void BM_Air(benchmark::State& state) {
  const Fixture& f = fixture();
  const perturb::LexiconNegator neg(f.corpus.truth->world.lexicon);
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::air(*f.model, f.air_pool, neg, {mode(state), false}));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_Air)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MrrAe(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        metrics::mrr_ae(*f.model, f.corpus.test, f.mrr, {mode(state), false}));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_MrrAe)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Rmse(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::rmse_metric(*f.model, f.corpus.test, mode(state)));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_Rmse)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
