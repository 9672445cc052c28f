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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion numbers to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "metric_oracles.hpp"
#include "revexp/corpus/analysis.hpp"
#include "revexp/corpus/corpus.hpp"
#include "revexp/harness/config.hpp"
#include "revexp/harness/pipeline.hpp"
#include "revexp/metrics/coherence.hpp"
#include "revexp/metrics/ranking.hpp"
#include "revexp/models/baselines.hpp"
#include "revexp/models/reference.hpp"
#include "revexp/nn/grad_check.hpp"
#include "revexp/nn/ops.hpp"
#include "revexp/perturb/perturb.hpp"

namespace {

namespace fs = std::filesystem;
using namespace revexp;

// Pinned tolerances.
constexpr double kGradTolerance = 1e-4;
constexpr double kGradBudgetSeconds = 60.0;
constexpr double kPerplexityTolerance = 1e-9;
constexpr double kRandomAirTarget = 50.0;
constexpr double kRandomAirBand = 2.0;
constexpr std::size_t kRandomAirPairs = 5000;
constexpr double kRandomMrrBand = 0.5;
constexpr std::size_t kRandomMrrInstances = 10000;
constexpr double kOracleRankFloor = 99.0;
constexpr double kOracleEntailFloor = 99.0;
constexpr double kOracleRmseCeiling = 0.1;
constexpr double kOracleTlaeSlack = 0.05;
constexpr double kPipelineBudgetSeconds = 600.0;
constexpr std::size_t kInvarianceInstances = 100;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path work_dir() {
  static const fs::path d = [] {
    fs::path p = fs::path(REVEXP_BINARY_DIR) / "acceptance_work";
    fs::create_directories(p);
    return p;
  }();
  return d;
}

// ---- 1 ---------------------------------------------------------------------

nn::AttentionLayout causal(std::size_t batch, std::size_t len, std::size_t heads) {
  nn::AttentionLayout l{batch, len, len, heads, {}};
  l.visible.resize(batch * len * len);
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j <= i; ++j) l.visible[(b * len + i) * len + j] = 1;
  return l;
}

struct GradCase {
  std::string name;
  std::function<nn::ParamStore(Rng&)> params;
  nn::LossFn loss;
};

std::vector<GradCase> primitive_cases() {
  using nn::Init;
  using nn::ParamStore;
  using nn::Tape;
  using nn::Tensor;
  using nn::Var;
  std::vector<GradCase> cases;
  auto two = [](Rng& rng) {
    ParamStore s;
    s.add("a", {3, 4}, Init::kUniform, rng, 1.0);
    s.add("b", {4, 2}, Init::kUniform, rng, 1.0);
    s.add("c", {1, 2}, Init::kUniform, rng, 1.0);
    return s;
  };
  const std::vector<double> target6{0.1, -0.2, 0.3, 0.0, 0.5, -0.4};
  cases.push_back({"matmul", two, [=](Tape& t, ParamStore& s) {
                     return nn::squared_error(
                         nn::matmul(t.param(s, 0), t.param(s, 1), t.param(s, 2)), target6);
                   }});
  cases.push_back({"gather", two, [](Tape& t, ParamStore& s) {
                     const std::vector<std::size_t> rows{2, 0, 2};
                     std::vector<double> tg(12, 0.25);
                     return nn::squared_error(nn::gather(t.param(s, 0), rows), tg);
                   }});
  cases.push_back({"elementwise", two, [](Tape& t, ParamStore& s) {
                     Var a = t.param(s, 0);
                     Var e = nn::add(nn::mul(nn::tanh(a), nn::sigmoid(a)),
                                     nn::scale(nn::relu(nn::add(nn::mul(a, a),
                                                                t.constant(Tensor({1, 4}, 0.1)))),
                                               0.3));
                     std::vector<double> tg(12, 0.1);
                     return nn::squared_error(e, tg);
                   }});
  cases.push_back({"attention", [](Rng& rng) {
                     ParamStore s;
                     s.add("q", {6, 4}, Init::kUniform, rng, 1.0);
                     s.add("k", {6, 4}, Init::kUniform, rng, 1.0);
                     s.add("v", {6, 4}, Init::kUniform, rng, 1.0);
                     return s;
                   },
                   [](Tape& t, ParamStore& s) {
                     Var a = nn::attention(t.param(s, 0), t.param(s, 1), t.param(s, 2),
                                           causal(2, 3, 2));
                     std::vector<double> tg(24, 0.2);
                     return nn::squared_error(a, tg);
                   }});
  cases.push_back({"recurrent_cell", [](Rng& rng) {
                     ParamStore s;
                     s.add("x", {2, 3}, Init::kUniform, rng, 1.0);
                     s.add("h", {2, 4}, Init::kUniform, rng, 1.0);
                     s.add("wx", {3, 12}, Init::kUniform, rng, 0.5);
                     s.add("wh", {4, 12}, Init::kUniform, rng, 0.5);
                     s.add("bx", {1, 12}, Init::kUniform, rng, 0.5);
                     s.add("bh", {1, 12}, Init::kUniform, rng, 0.5);
                     return s;
                   },
                   [](Tape& t, ParamStore& s) {
                     Var h = nn::recurrent_cell(
                         t.param(s, 0), t.param(s, 1),
                         {t.param(s, 2), t.param(s, 3), t.param(s, 4), t.param(s, 5)});
                     std::vector<double> tg(8, -0.1);
                     return nn::squared_error(h, tg);
                   }});
  cases.push_back({"layer_norm", [](Rng& rng) {
                     ParamStore s;
                     s.add("x", {3, 5}, Init::kUniform, rng, 1.0);
                     s.add("g", {1, 5}, Init::kUniform, rng, 1.0);
                     s.add("b", {1, 5}, Init::kUniform, rng, 1.0);
                     return s;
                   },
                   [](Tape& t, ParamStore& s) {
                     Var n = nn::layer_norm(t.param(s, 0), t.param(s, 1), t.param(s, 2));
                     std::vector<double> tg(15);
                     for (std::size_t i = 0; i < tg.size(); ++i) tg[i] = 0.1 * double(i % 3);
                     return nn::squared_error(n, tg);
                   }});
  cases.push_back({"every primitive composed", [](Rng& rng) {
                     ParamStore s;
                     for (const char* n : {"table", "w", "wq", "wk", "wv"}) {
                       s.add(n, {n[0] == 't' ? 6u : 4u, 4}, Init::kUniform, rng, 0.5);
                     }
                     for (const char* n : {"b", "ln_g", "ln_b"}) s.add(n, {1, 4}, Init::kUniform, rng, 0.5);
                     s.add("gru_wx", {4, 9}, Init::kUniform, rng, 0.5);
                     s.add("gru_wh", {3, 9}, Init::kUniform, rng, 0.5);
                     s.add("gru_bx", {1, 9}, Init::kUniform, rng, 0.5);
                     s.add("gru_bh", {1, 9}, Init::kUniform, rng, 0.5);
                     s.add("out", {4, 5}, Init::kUniform, rng, 0.5);
                     s.add("head", {3, 1}, Init::kUniform, rng, 0.5);
                     return s;
                   },
                   [](Tape& t, ParamStore& s) {
                     auto p = [&](const char* name) { return t.param(s, s.id(name)); };
                     const std::vector<std::size_t> ids{0, 3, 5, 1, 3};
                     Var x = nn::gather(p("table"), ids);
                     Var y = nn::tanh(nn::matmul(x, p("w"), p("b")));
                     Var shifted = nn::relu(nn::add(nn::mul(x, x), t.constant(Tensor({1, 4}, 0.1))));
                     Var a = nn::attention(nn::matmul(y, p("wq")), nn::matmul(y, p("wk")),
                                           nn::matmul(y, p("wv")), causal(1, 5, 2));
                     Var n = nn::layer_norm(nn::add(nn::add(a, y), shifted), p("ln_g"), p("ln_b"));
                     const std::vector<std::size_t> first_two{0, 1};
                     Var h0 = t.constant(
                         Tensor({2, 3}, std::vector<double>{0.1, -0.2, 0.3, 0.0, 0.2, -0.1}));
                     Var h1 = nn::recurrent_cell(nn::gather(n, first_two), h0,
                                                 {p("gru_wx"), p("gru_wh"), p("gru_bx"), p("gru_bh")});
                     const std::vector<int> targets{1, 4, -1, 0, 2};
                     Var ce = nn::softmax_cross_entropy(nn::matmul(n, p("out")), targets);
                     const std::vector<double> ratings{0.3, -0.4};
                     Var se = nn::squared_error(nn::matmul(nn::sigmoid(h1), p("head")), ratings);
                     return nn::add(ce, nn::scale(se, 0.5));
                   }});
  cases.push_back({"softmax_cross_entropy", two, [](Tape& t, ParamStore& s) {
                     const std::vector<int> targets{3, -1, 0};
                     return nn::softmax_cross_entropy(t.param(s, 0), targets);
                   }});
  return cases;
}

Verdict criterion_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string worst_case;
  auto record = [&](const std::string& name, std::uint64_t seed, const nn::GradCheckResult& r) {
    if (r.max_relative_error >= worst) {
      worst = r.max_relative_error;
      worst_case = name + " seed " + std::to_string(seed) + " " + r.worst_parameter;
    }
  };
  for (const auto& c : primitive_cases()) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng rng(seed * 7919);
      nn::ParamStore s = c.params(rng);
      record(c.name, seed, nn::grad_check(c.loss, s, 1e-4));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < kGradTolerance && secs < kGradBudgetSeconds,
          std::to_string(primitive_cases().size()) + " layer types x 5 seeds, max relative error " +
              fmt("%.3g", worst) + " (" + worst_case + "), " + fmt("%.1f s", secs)};
}

// ---- 2 ---------------------------------------------------------------------

Verdict criterion_perplexity_law() {
  const std::vector<std::vector<std::string>> texts{
      {"a"}, {"the", "food", "was", "great"}, {"i", "x", "y", "z", "w", "v", "u", "t", "s"}};
  double worst = 0.0;
  for (const std::size_t v : {2u, 50u, 1000u}) {
    const models::UniformScorer u(v);
    for (const auto& t : texts) {
      const double ppl = models::perplexity(u, {0, 0, {}}, t);
      worst = std::max(worst, std::abs(ppl / static_cast<double>(v) - 1.0));
    }
  }
  return {worst < kPerplexityTolerance,
          "V in {2, 50, 1000}, max relative deviation " + fmt("%.3g", worst)};
}

// ---- 3 ---------------------------------------------------------------------

Verdict criterion_random_baselines() {
  const corpus::Corpus c =
      corpus::build_corpus(corpus::generate_world(2000, 200, 8, 71), 80, {}, 72);
  const corpus::Lexicon& lex = c.truth->world.lexicon;
  const models::RandomScorer rnd(73, c.vocab.tokens());
  const perturb::LexiconNegator neg(lex);
  const auto a = metrics::air(rnd, metrics::air_pool(c.test), neg);
  const auto inst = metrics::build_mrr_instances(c.test, lex, 100, 74, kRandomMrrInstances);
  const auto m = metrics::mrr_ae(rnd, c.test, inst);
  const double expected = metrics::random_mrr(101);
  const bool pass = a.samples >= kRandomAirPairs &&
                    std::abs(a.value - kRandomAirTarget) <= kRandomAirBand &&
                    inst.size() >= kRandomMrrInstances &&
                    std::abs(m.value - expected) <= kRandomMrrBand;
  return {pass, "AIR " + fmt("%.3f", a.value) + " over " + std::to_string(a.samples) +
                    " pairs (target 50 +/- 2); MRR-AE k=100 " + fmt("%.4f", m.value) + " over " +
                    std::to_string(inst.size()) + " instances (100*H(101)/101 = " +
                    fmt("%.4f", expected) + " +/- 0.5)"};
}

// ---- 4, 5, 9 share one full run of the default configuration -----------------

struct DefaultRun {
  harness::RunConfig config;
  harness::RunPaths paths;
  harness::EvaluationReport report;
  double seconds = 0.0;
  std::string error;
};

const DefaultRun& default_run() {
  static const DefaultRun run = [] {
    DefaultRun r;
    r.config = harness::load_config(fs::path(REVEXP_SOURCE_DIR) / "fixtures" / "default.cfg");
    r.paths.root = work_dir() / "default";
    fs::remove_all(r.paths.root);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.report = harness::run_pipeline(r.config, r.paths);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

const harness::ReportRow* row(const harness::EvaluationReport& r, const std::string& model) {
  for (const auto& x : r.rows) {
    if (x.model == model) return &x;
  }
  return nullptr;
}

double cell(const harness::ReportRow* r, const std::string& metric) {
  const auto* m = r ? r->find(metric) : nullptr;
  return m ? m->value : std::nan("");
}

Verdict criterion_oracle_bounds() {
  const DefaultRun& run = default_run();
  if (!run.error.empty()) return {false, "pipeline failed: " + run.error};
  const auto* o = row(run.report, "oracle");
  const auto corpus = harness::load_corpus_artifacts(run.config, run.paths.root).corpus;
  const double air = cell(o, "AIR"), mrr = cell(o, "MRR-AE"), ent = cell(o, "Entail"),
               rmse = cell(o, "RMSE"), tlae = cell(o, "TLAE");
  const double tlae_cap = kOracleTlaeSlack + run.report.calibration_mse;
  const bool shape = run.config.corpus.users == 200 && run.config.corpus.items == 100 &&
                     run.config.corpus.aspects == 8 && corpus.size() == 8000;
  const bool pass = shape && air >= kOracleRankFloor && mrr >= kOracleRankFloor &&
                    ent >= kOracleEntailFloor && rmse <= kOracleRmseCeiling && tlae <= tlae_cap &&
                    run.seconds < kPipelineBudgetSeconds;
  return {pass, "corpus " + std::to_string(corpus.size()) + " reviews; oracle AIR " +
                    fmt("%.2f", air) + ", MRR-AE " + fmt("%.2f", mrr) + ", Entail " +
                    fmt("%.2f", ent) + ", RMSE " + fmt("%.4f", rmse) + ", TLAE " +
                    fmt("%.4f", tlae) + " (cap " + fmt("%.4f", tlae_cap) +
                    "); full pipeline, all " + std::to_string(run.report.rows.size()) +
                    " models, " + fmt("%.1f s", run.seconds)};
}

Verdict criterion_trained_sanity() {
  const DefaultRun& run = default_run();
  if (!run.error.empty()) return {false, "pipeline failed: " + run.error};
  const auto corpus = harness::load_corpus_artifacts(run.config, run.paths.root).corpus;
  const auto model = models::load_model(run.paths.checkpoint("transformer"));
  const models::UnigramModel unigram(corpus.vocab, corpus.train);
  const double ppl = models::corpus_perplexity(*model, corpus.test);
  const double ppl_unigram = models::corpus_perplexity(unigram, corpus.test);
  const double rmse = models::model_rmse(*model, corpus.test);
  const double rmse_mean = models::constant_rmse(models::mean_rating(corpus.train), corpus.test);
  const double ent = cell(row(run.report, "transformer"), "Entail");
  const double ent_cond = cell(row(run.report, "transformer_cond"), "Entail");
  const bool beats = ppl < ppl_unigram && rmse < rmse_mean;
  const bool conditioned = ent_cond > ent;
  return {beats && conditioned,
          "transformer test perplexity " + fmt("%.3f", ppl) + " vs unigram " +
              fmt("%.3f", ppl_unigram) + ", RMSE " + fmt("%.4f", rmse) + " vs mean " +
              fmt("%.4f", rmse_mean) + (beats ? " (beats both)" : " (DOES NOT beat both)") +
              "; Entail conditioned " + fmt("%.3f", ent_cond) + " vs unconditioned " +
              fmt("%.3f", ent) + (conditioned ? " (exceeds)" : " (does NOT exceed)")};
}

Verdict criterion_negation_soundness() {
  const DefaultRun& run = default_run();
  if (!run.error.empty()) return {false, "pipeline failed: " + run.error};
  const auto a = harness::load_corpus_artifacts(run.config, run.paths.root);
  std::size_t positive = 0, unperturbable = 0, negative = 0;
  for (const auto& r : a.corpus.test) {
    if (corpus::classify_polarity(r.tokens, a.lexicon) != corpus::Polarity::kPositive) continue;
    ++positive;
    const auto out = perturb::negate_sentiment(r.tokens, a.lexicon);
    if (!out) {
      ++unperturbable;
      continue;
    }
    if (corpus::classify_polarity(out->perturbed, a.lexicon) == corpus::Polarity::kNegative) {
      ++negative;
    }
  }
  const std::size_t perturbable = positive - unperturbable;
  return {positive > 0 && negative == perturbable,
          std::to_string(negative) + " of " + std::to_string(perturbable) +
              " perturbable positive test reviews negated to negative; unperturbable " +
              std::to_string(unperturbable) + " of " + std::to_string(positive)};
}

// ---- 6 ---------------------------------------------------------------------

Verdict criterion_brute_force() {
  std::size_t agree = 0, total = 0;
  for (int i = 0; i < 10; ++i) {
    const corpus::Corpus c = testing::fixture_corpus(i);
    const corpus::Lexicon& lex = c.truth->world.lexicon;
    const perturb::LexiconNegator neg(lex);
    const models::RandomScorer rnd(static_cast<std::uint64_t>(500 + i));
    const testing::CoarseScorer coarse(rnd);
    const models::ExplainableRecommender& m =
        i % 2 == 0 ? static_cast<const models::ExplainableRecommender&>(rnd) : coarse;

    const auto b = testing::brute_air(m, c.test, neg);
    const auto r = metrics::air(m, metrics::air_pool(c.test), neg);
    agree += r.value == b.value && r.samples == b.evaluated && r.excluded == b.skipped;

    const auto inst = metrics::build_mrr_instances(c.test, lex, 5, 600 + i);
    agree += metrics::mrr_ae(m, c.test, inst).value == testing::brute_mrr(m, c.test, inst);

    Rng rng(700 + static_cast<std::uint64_t>(i));
    nn::Tensor emb = nn::Tensor::matrix(c.vocab.size(), 6);
    for (double& v : emb.values()) v = rng.uniform(-1.0, 1.0);
    const auto& g = c.test[rng.below(c.test.size())].tokens;
    const auto& ref = c.train[rng.below(c.train.size())].tokens;
    agree += metrics::greedy_match_f1(g, ref, c.vocab, emb).f1 ==
             testing::brute_greedy_f1(g, ref, c.vocab, emb);

    std::vector<double> p, gold;
    for (const auto& rv : c.test) {
      p.push_back(rnd.predict_rating(rv.user, rv.item));
      gold.push_back(rv.rating);
    }
    agree += metrics::rmse(p, gold) == testing::brute_rmse(p, gold);
    total += 4;
  }
  return {agree == total, std::to_string(agree) + " of " + std::to_string(total) +
                              " (metric, fixture) pairs agree exactly"};
}

// ---- 7 ---------------------------------------------------------------------

Verdict criterion_invariance() {
  const corpus::Corpus c =
      corpus::build_corpus(corpus::generate_world(150, 60, 8, 81), 30, {}, 82);
  const corpus::Lexicon& lex = c.truth->world.lexicon;
  const perturb::LexiconNegator neg(lex);
  const models::RandomScorer rnd(83);
  const testing::CoarseScorer coarse(rnd);
  const models::OracleModel oracle(c.truth, c.vocab.size());
  const auto pool = metrics::air_pool(c.test);
  const auto inst = metrics::build_mrr_instances(c.test, lex, 20, 84);
  std::size_t same = 0, checks = 0;
  for (const models::ExplainableRecommender* m :
       {static_cast<const models::ExplainableRecommender*>(&rnd),
        static_cast<const models::ExplainableRecommender*>(&coarse),
        static_cast<const models::ExplainableRecommender*>(&oracle)}) {
    const testing::SquaredPerplexity sq(*m);
    const metrics::RankingOptions audit{metrics::Execution::kParallel, true};
    const auto a = metrics::air(*m, pool, neg, audit), a2 = metrics::air(sq, pool, neg, audit);
    const auto r = metrics::mrr_ae(*m, c.test, inst, audit),
               r2 = metrics::mrr_ae(sq, c.test, inst, audit);
    // Per-instance outcomes, not just the aggregate.
    auto flips = [](const metrics::MetricResult& x) {
      std::vector<char> v;
      for (const auto& l : x.audit) v.push_back(l.back());
      return v;
    };
    auto ranks = [](const metrics::MetricResult& x) {
      std::vector<std::string> v;
      for (const auto& l : x.audit) {
        std::istringstream in(l);
        std::string f;
        for (int k = 0; k < 5; ++k) std::getline(in, f, '\t');
        v.push_back(f);
      }
      return v;
    };
    same += a.value == a2.value && a.samples == a2.samples && flips(a) == flips(a2);
    same += r.value == r2.value && ranks(r) == ranks(r2);
    checks += 2;
  }
  const bool enough = pool.size() >= kInvarianceInstances && inst.size() >= kInvarianceInstances;
  return {same == checks && enough,
          std::to_string(same) + " of " + std::to_string(checks) +
              " (model, metric) outputs unchanged under p -> p^2; " + std::to_string(pool.size()) +
              " AIR and " + std::to_string(inst.size()) + " MRR-AE instances"};
}

// ---- 8 ---------------------------------------------------------------------

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), root).generic_string();
    if (rel == "timing.txt") continue;
    out[rel] = slurp(e.path());
  }
  return out;
}

Verdict criterion_determinism() {
  const fs::path cfg = fs::path(REVEXP_SOURCE_DIR) / "fixtures" / "smoke.cfg";
  std::vector<std::map<std::string, std::string>> trees;
  for (const char* name : {"det_a", "det_b"}) {
    const fs::path out = work_dir() / name;
    fs::remove_all(out);
    const std::string cmd = std::string(REVEXP_CLI) + " run-all --quiet --config " +
                            cfg.string() + " --out " + out.string() + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "run-all failed: " + cmd};
    trees.push_back(tree_contents(out));
  }
  std::size_t corpus = 0, ckpt = 0, report = 0, differ = 0;
  std::set<std::string> names;
  for (const auto& [k, v] : trees[0]) names.insert(k);
  for (const auto& [k, v] : trees[1]) names.insert(k);
  for (const auto& n : names) {
    const auto a = trees[0].find(n), b = trees[1].find(n);
    if (a == trees[0].end() || b == trees[1].end() || a->second != b->second) {
      ++differ;
      continue;
    }
    if (n.starts_with("corpus.")) ++corpus;
    if (n.ends_with(".ckpt")) ++ckpt;
    if (n.starts_with("report.")) ++report;
  }
  const bool pass = differ == 0 && corpus == 2 && ckpt >= 1 && report == 2;
  return {pass, std::to_string(names.size()) + " artifacts compared, " + std::to_string(differ) +
                    " differ; identical corpus files " + std::to_string(corpus) +
                    ", checkpoints " + std::to_string(ckpt) + ", reports " +
                    std::to_string(report)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"gradient correctness", criterion_gradients},
      {"perplexity law", criterion_perplexity_law},
      {"random baselines", criterion_random_baselines},
      {"oracle upper bounds", criterion_oracle_bounds},
      {"trained-model sanity", criterion_trained_sanity},
      {"metric oracle equivalence", criterion_brute_force},
      {"rank-metric invariance", criterion_invariance},
      {"determinism", criterion_determinism},
      {"perturbation soundness", criterion_negation_soundness},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!wanted.empty() && !wanted.contains(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
