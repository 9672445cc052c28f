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

#include "revexp/harness/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "revexp/corpus/world.hpp"
#include "revexp/error.hpp"
#include "revexp/metrics/aux_regressor.hpp"
#include "revexp/metrics/coherence.hpp"
#include "revexp/metrics/ranking.hpp"
#include "revexp/models/generation.hpp"
#include "revexp/models/neural.hpp"
#include "revexp/models/reference.hpp"
#include "revexp/models/train.hpp"
#include "revexp/perturb/perturb.hpp"
#include "revexp/rng.hpp"

namespace revexp::harness {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path RunPaths::audit(const std::string& model, const std::string& metric) const {
  // "TLAE (gold rating)" -> tlae-gold-rating
  std::string file;
  for (const char c : metric) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      file += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!file.empty() && file.back() != '-') {
      file += '-';
    }
  }
  while (!file.empty() && file.back() == '-') file.pop_back();
  return root / "audit" / model / (file + ".tsv");
}

namespace {

constexpr std::uint64_t kWorldStream = 0x3011dULL;
constexpr std::uint64_t kSplitStream = 0x5b117ULL;
constexpr std::uint64_t kAuxStream = 0xa0ULL;
constexpr std::uint64_t kSampleStream = 0x5a3bULL;

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string read_text(const fs::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing " + what + " " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> read_meta(const fs::path& path, const std::string& what) {
  std::map<std::string, std::string> kv;
  std::istringstream in(read_text(path, what));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

void check_hash(const std::string& found, std::uint64_t expected, const fs::path& artifact) {
  if (found != hex64(expected)) {
    throw Error("config hash mismatch: " + artifact.string() + " was produced by config " +
                found + ", current config is " + hex64(expected));
  }
}

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw Error(std::string("stage ") + stage + ": " + e.what());
  }
}

fs::path corpus_dir(const RunPaths& out, const PipelineOptions& opt) {
  return opt.corpus_dir.empty() ? out.root : opt.corpus_dir;
}

bool needs_regressor(const RunConfig& c) {
  return c.metrics.has("tlae") || c.metrics.has("greedy-f1");
}

bool needs_generations(const RunConfig& c) {
  return c.metrics.has("tlae") || c.metrics.has("entail") || c.metrics.has("greedy-f1") ||
         c.metrics.has("cond-nll") ||
         (c.metrics.has("air") && c.metrics.air_mode != AirMode::kGroundTruth);
}

std::uint64_t random_seed(const RunConfig& c, const ModelEntry& e) {
  return derive_seed(c.seeds.model, fnv1a(e.name));
}

void write_audit(const RunPaths& out, const std::string& model, const metrics::MetricResult& m) {
  std::string text;
  for (const auto& line : m.audit) text += line + "\n";
  write_text(out.audit(model, m.name), text);
}

}  // namespace

std::size_t explanation_count(const RunConfig& config, const corpus::Corpus& corpus) {
  return std::min(config.metrics.n_explanations, corpus.test.size());
}

CorpusArtifacts load_corpus_artifacts(const RunConfig& config, const fs::path& dir) {
  const RunPaths p{dir};
  const auto meta = read_meta(p.corpus_meta(), "corpus metadata");
  const auto it = meta.find("corpus_hash");
  if (it == meta.end()) throw Error(p.corpus_meta().string() + " lacks corpus_hash");
  check_hash(it->second, config.corpus_hash(), p.corpus());
  CorpusArtifacts a{corpus::load_corpus(p.corpus()),
                    corpus::Lexicon::load(p.lexicon())};
  if (meta.count("synthetic") && meta.at("synthetic") == "1") {
    auto truth = std::make_shared<corpus::GroundTruth>();
    truth->world = corpus::load_world(p.world(), a.lexicon);
    truth->corpus_seed = std::stoull(meta.at("corpus_seed"));
    a.corpus.truth = std::move(truth);
  }
  return a;
}

void gen_corpus_stage(const RunConfig& config, const RunPaths& out, const PipelineOptions& opt) {
  in_stage("gen-corpus", [&] {
    fs::create_directories(out.root);
    const corpus::Lexicon lexicon = config.corpus.lexicon.empty()
                                        ? corpus::Lexicon::default_lexicon()
                                        : corpus::Lexicon::load(config.corpus.lexicon);
    std::ostringstream meta;
    meta << "corpus_hash=" << hex64(config.corpus_hash()) << "\n";
    corpus::Corpus c;
    if (!config.corpus.path.empty()) {
      c = corpus::load_corpus(config.corpus.path);
      meta << "synthetic=0\n";
    } else {
      const corpus::SyntheticWorld world = corpus::generate_world(
          config.corpus.users, config.corpus.items, config.corpus.aspects,
          derive_seed(config.seeds.corpus, kWorldStream), lexicon);
      const std::uint64_t split_seed = derive_seed(config.seeds.corpus, kSplitStream);
      c = corpus::build_corpus(world, config.corpus.reviews_per_user, config.corpus.ratios,
                               split_seed);
      corpus::save_world(out.world(), world);
      meta << "synthetic=1\ncorpus_seed=" << split_seed << "\n";
    }
    meta << "fingerprint=" << corpus::corpus_fingerprint(c) << "\n";
    corpus::save_corpus(c, out.corpus());
    write_text(out.lexicon(), lexicon.serialize());
    write_text(out.corpus_meta(), meta.str());
    if (opt.log) {
      *opt.log << "corpus: " << c.train.size() << " train, " << c.validation.size()
               << " validation, " << c.test.size() << " test reviews, vocabulary "
               << c.vocab.size() << "\n";
    }
  });
}

void train_stage(const RunConfig& config, const RunPaths& out, const PipelineOptions& opt) {
  in_stage("train", [&] {
    const CorpusArtifacts a = load_corpus_artifacts(config, corpus_dir(out, opt));
    for (const ModelEntry& e : config.models) {
      if (!e.neural()) continue;
      std::ostringstream log;
      models::TrainResult r = models::train(e.model, a.corpus, e.train, config.seeds.model, &log);
      log << e.name << " best epoch " << r.best_epoch << "\n";
      fs::create_directories(out.checkpoint(e.name).parent_path());
      models::save_model(out.checkpoint(e.name), *r.model, config.model_hash(e));
      write_text(out.train_log(e.name), log.str());
      if (opt.log) *opt.log << log.str();
    }
    if (needs_regressor(config)) {
      std::ostringstream log;
      const metrics::AuxRegressor reg = metrics::train_aux_regressor(
          a.corpus, config.metrics.aux, derive_seed(config.seeds.eval, kAuxStream), &log);
      fs::create_directories(out.aux_checkpoint().parent_path());
      metrics::save_aux_regressor(out.aux_checkpoint(), reg, config.aux_hash());
      write_text(out.train_log("aux_regressor"), log.str());
      if (opt.log) *opt.log << log.str();
    }
  });
}

std::unique_ptr<models::ExplainableRecommender> load_roster_model(const RunConfig& config,
                                                                  const ModelEntry& e,
                                                                  const CorpusArtifacts& a,
                                                                  const RunPaths& out) {
  switch (e.type) {
    case ModelType::kRecurrent:
    case ModelType::kTransformer: {
      const fs::path ckpt = out.checkpoint(e.name);
      if (!fs::exists(ckpt)) throw Error("missing checkpoint " + ckpt.string() + " (run train)");
      std::uint64_t hash = 0;
      auto m = models::load_model(ckpt, &hash);
      check_hash(hex64(hash), config.model_hash(e), ckpt);
      if (!(m->domain().vocab == a.corpus.vocab)) {
        throw Error(ckpt.string() + " was trained on a different vocabulary");
      }
      return m;
    }
    case ModelType::kOracle:
      if (!a.corpus.truth) throw Error("oracle model needs a synthetic corpus");
      return std::make_unique<models::OracleModel>(a.corpus.truth, a.corpus.vocab.size());
    case ModelType::kRandom: {
      const auto& toks = a.corpus.vocab.tokens();
      std::vector<std::string> words(toks.begin() + corpus::Vocab::kReserved, toks.end());
      return std::make_unique<models::RandomScorer>(random_seed(config, e), std::move(words));
    }
  }
  throw Error("unhandled model type");
}

void generate_stage(const RunConfig& config, const RunPaths& out, const PipelineOptions& opt) {
  in_stage("generate", [&] {
    const CorpusArtifacts a = load_corpus_artifacts(config, corpus_dir(out, opt));
    const std::size_t n = explanation_count(config, a.corpus);
    const std::span<const corpus::Review> reviews(a.corpus.test.data(), n);
    models::DecodeOptions decode;
    decode.max_len = config.metrics.max_len;
    for (const ModelEntry& e : config.models) {
      const auto model = load_roster_model(config, e, a, out);
      const auto gens = models::generate_explanations(
          *model, reviews, decode, opt.execution == metrics::Execution::kParallel);
      fs::create_directories(out.generations(e.name).parent_path());
      models::save_generations(out.generations(e.name), gens);
      write_text(out.generations_meta(e.name),
                 "generation_hash=" + hex64(config.generation_hash(e)) + "\nmodel=" + e.name +
                     "\ncount=" + std::to_string(gens.size()) + "\n");
      if (opt.log) *opt.log << e.name << ": " << gens.size() << " explanations\n";
    }
  });
}

namespace {

std::vector<models::Generation> load_checked_generations(const RunConfig& config,
                                                         const ModelEntry& e,
                                                         const RunPaths& out) {
  const auto meta = read_meta(out.generations_meta(e.name), "generation metadata");
  const auto it = meta.find("generation_hash");
  if (it == meta.end()) throw Error(out.generations_meta(e.name).string() + " lacks a hash");
  check_hash(it->second, config.generation_hash(e), out.generations(e.name));
  return models::load_generations(out.generations(e.name));
}

}  // namespace

void evaluate_stage(const RunConfig& config, const RunPaths& out, const PipelineOptions& opt) {
  in_stage("evaluate", [&] {
    const CorpusArtifacts a = load_corpus_artifacts(config, corpus_dir(out, opt));
    const auto& cm = config.metrics;
    const std::size_t n = explanation_count(config, a.corpus);
    const std::span<const corpus::Review> reviews(a.corpus.test.data(), n);
    const metrics::Execution ex = opt.execution;
    const metrics::RankingOptions ranking{ex, config.audit};

    std::vector<metrics::MrrInstance> mrr;
    if (cm.has("mrr-ae")) {
      mrr = metrics::build_mrr_instances(a.corpus.test, a.lexicon, cm.k,
                                         derive_seed(config.seeds.eval, kSampleStream), n, ex);
    }
    std::unique_ptr<metrics::AuxRegressor> reg;
    if (needs_regressor(config)) {
      if (!fs::exists(out.aux_checkpoint())) {
        throw Error("missing regressor checkpoint " + out.aux_checkpoint().string() +
                    " (run train)");
      }
      std::uint64_t hash = 0;
      reg = std::make_unique<metrics::AuxRegressor>(
          metrics::load_aux_regressor(out.aux_checkpoint(), &hash));
      check_hash(hex64(hash), config.aux_hash(), out.aux_checkpoint());
    }
    std::unique_ptr<metrics::BigramLM> lm;
    if (cm.has("cond-nll")) lm = std::make_unique<metrics::BigramLM>(a.corpus.vocab, a.corpus.train);
    const perturb::LexiconNegator negator(a.lexicon);

    for (const ModelEntry& e : config.models) {
      const auto model = load_roster_model(config, e, a, out);
      std::vector<models::Generation> gens;
      if (needs_generations(config)) gens = load_checked_generations(config, e, out);
      if (!gens.empty() && gens.size() != n) {
        throw Error(out.generations(e.name).string() + " holds " + std::to_string(gens.size()) +
                    " explanations, expected " + std::to_string(n));
      }
      std::vector<metrics::MetricResult> results;
      std::vector<std::string> notes;
      if (cm.has("air")) {
        if (cm.air_mode != AirMode::kGenerated) {
          results.push_back(metrics::air(*model, metrics::air_pool(reviews), negator, ranking));
        }
        if (cm.air_mode != AirMode::kGroundTruth) {
          const auto pool = metrics::air_pool_generated(reviews, gens);
          const bool perturbable = std::any_of(pool.begin(), pool.end(), [&](const auto& p) {
            return !p.text.empty() && negator.negate(p.text).has_value();
          });
          if (perturbable) {
            auto r = metrics::air(*model, pool, negator, ranking);
            r.name = "AIR (generated)";
            for (auto& line : r.audit) line.replace(0, 3, r.name);
            results.push_back(std::move(r));
          } else {
            notes.push_back(e.name + ": AIR (generated) not computed, none of its " +
                            std::to_string(pool.size()) +
                            " explanations for positive reviews has an opinion term.");
          }
        }
      }
      if (cm.has("mrr-ae")) results.push_back(metrics::mrr_ae(*model, a.corpus.test, mrr, ranking));
      const bool has_text = std::any_of(gens.begin(), gens.end(),
                                        [](const auto& g) { return !g.words.empty(); });
      if (!has_text && !gens.empty()) {
        notes.push_back(e.name + ": all " + std::to_string(gens.size()) +
                        " explanations are empty; text metrics not computed.");
      }
      if (cm.has("tlae") && has_text) {
        if (cm.tlae_mode != TlaeMode::kGoldRating) {
          results.push_back(metrics::tlae(*reg, gens, reviews, metrics::TlaeTarget::kModelRating,
                                          ex, config.audit));
        }
        if (cm.tlae_mode != TlaeMode::kModelRating) {
          results.push_back(metrics::tlae(*reg, gens, reviews, metrics::TlaeTarget::kGoldRating,
                                          ex, config.audit));
        }
      }
      if (cm.has("entail") && has_text) {
        results.push_back(metrics::entail_metric(gens, reviews, a.lexicon, config.audit));
      }
      if (cm.has("greedy-f1") && has_text) {
        results.push_back(metrics::greedy_match_metric(gens, reviews, reg->vocab(),
                                                       reg->embeddings(), ex, config.audit));
      }
      if (cm.has("cond-nll") && has_text) {
        results.push_back(
            metrics::cond_nll_metric(gens, reviews, *lm, cm.cond_nll_lambda, ex, config.audit));
      }
      if (cm.has("rmse")) results.push_back(metrics::rmse_metric(*model, reviews, ex, config.audit));

      json ms = json::array();
      for (auto& r : results) {
        if (config.audit) write_audit(out, e.name, r);
        r.audit.clear();
        ms.push_back(json::parse(metric_to_json(r)));
      }
      const json doc{{"model", e.name},
                     {"type", model->kind()},
                     {"privileged", model->privileged()},
                     {"config_hash", hex64(config.hash())},
                     {"metrics", ms},
                     {"notes", notes}};
      write_text(out.results(e.name), doc.dump(2) + "\n");
      if (opt.log) {
        *opt.log << e.name << ":";
        for (const auto& r : results) *opt.log << " " << r.name << "=" << r.value;
        *opt.log << "\n";
      }
    }
  });
}

EvaluationReport report_stage(const RunConfig& config, const RunPaths& out,
                              const PipelineOptions& opt) {
  return in_stage("report", [&] {
    const fs::path cdir = corpus_dir(out, opt);
    const auto meta = read_meta(RunPaths{cdir}.corpus_meta(), "corpus metadata");
    check_hash(meta.count("corpus_hash") ? meta.at("corpus_hash") : "", config.corpus_hash(),
               RunPaths{cdir}.corpus());
    const corpus::Corpus c = corpus::load_corpus(RunPaths{cdir}.corpus());

    EvaluationReport r;
    r.config_hash = hex64(config.hash());
    r.corpus_hash = hex64(config.corpus_hash());
    r.corpus_fingerprint = meta.count("fingerprint") ? meta.at("fingerprint") : "";
    r.seeds = config.seeds;
    r.k = config.metrics.k;
    r.n_explanations = explanation_count(config, c);
    if (needs_regressor(config)) {
      r.calibration_mse = metrics::load_aux_regressor(out.aux_checkpoint()).validation_mse;
    }
    r.notes.push_back(
        "Unperturbable texts and empty explanations are excluded from denominators and counted.");
    if (config.metrics.has("mrr-ae")) {
      r.notes.push_back(
          "MRR-AE candidates whose substituted text repeats the gold or another candidate are "
          "redrawn; ties rank the gold last.");
    }
    if (config.metrics.has("tlae")) {
      r.notes.push_back("TLAE compares the regressor's reading of each explanation with the "
                        "generating model's rating; the gold-rating variant uses test ratings.");
    }
    if (config.metrics.has("greedy-f1") || config.metrics.has("cond-nll")) {
      r.notes.push_back("GreedyF1 matches regressor word embeddings; CondNLL scores under a "
                        "train-split bigram model mixed with each reference's bigrams.");
    }
    for (const ModelEntry& e : config.models) {
      json doc;
      try {
        doc = json::parse(read_text(out.results(e.name), "results file"));
      } catch (const json::exception& ex) {
        throw Error(out.results(e.name).string() + ": " + ex.what());
      }
      if (doc.at("config_hash").get<std::string>() != r.config_hash) {
        throw Error("config hash mismatch: " + out.results(e.name).string());
      }
      ReportRow row;
      row.model = e.name;
      row.type = doc.at("type").get<std::string>();
      row.privileged = doc.at("privileged").get<bool>();
      for (const auto& m : doc.at("metrics")) row.metrics.push_back(metric_from_json(m.dump()));
      for (const auto& n : doc.at("notes")) r.notes.push_back(n.get<std::string>());
      r.rows.push_back(std::move(row));
    }
    emit_report(r, ReportFormat::kMachine, out.report_json());
    emit_report(r, ReportFormat::kHuman, out.report_text());
    return r;
  });
}

EvaluationReport run_pipeline(const RunConfig& config, const RunPaths& out,
                              const PipelineOptions& opt) {
  config.validate();
  std::ostringstream timing;
  auto timed = [&](const char* name, const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %.3f s\n", name, s);
    timing << buf;
    if (opt.log) *opt.log << buf;
  };
  EvaluationReport report;
  const auto t0 = std::chrono::steady_clock::now();
  if (opt.corpus_dir.empty() || opt.corpus_dir == out.root) {
    timed("gen-corpus", [&] { gen_corpus_stage(config, out, opt); });
  }
  timed("train", [&] { train_stage(config, out, opt); });
  timed("generate", [&] { generate_stage(config, out, opt); });
  timed("evaluate", [&] { evaluate_stage(config, out, opt); });
  timed("report", [&] { report = report_stage(config, out, opt); });
  char buf[64];
  std::snprintf(buf, sizeof buf, "total %.3f s\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  timing << buf;
  write_text(out.timing(), timing.str());
  return report;
}

}  // namespace revexp::harness
