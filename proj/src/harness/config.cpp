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

#include "revexp/harness/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "revexp/corpus/lexicon.hpp"
#include "revexp/error.hpp"
#include "revexp/rng.hpp"

namespace revexp::harness {

namespace pt = boost::property_tree;

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string_view model_type_name(ModelType t) {
  switch (t) {
    case ModelType::kRecurrent:
      return "recurrent";
    case ModelType::kTransformer:
      return "transformer";
    case ModelType::kOracle:
      return "oracle";
    case ModelType::kRandom:
      return "random";
  }
  return "?";
}

ModelType parse_model_type(std::string_view name) {
  for (const ModelType t :
       {ModelType::kRecurrent, ModelType::kTransformer, ModelType::kOracle, ModelType::kRandom}) {
    if (model_type_name(t) == name) return t;
  }
  throw Error("unknown model type '" + std::string(name) + "'");
}

std::string_view air_mode_name(AirMode m) {
  switch (m) {
    case AirMode::kGroundTruth:
      return "ground-truth";
    case AirMode::kGenerated:
      return "generated";
    case AirMode::kBoth:
      return "both";
  }
  return "?";
}

AirMode parse_air_mode(std::string_view name) {
  for (const AirMode m : {AirMode::kGroundTruth, AirMode::kGenerated, AirMode::kBoth}) {
    if (air_mode_name(m) == name) return m;
  }
  throw Error("unknown AIR mode '" + std::string(name) + "'");
}

std::string_view tlae_mode_name(TlaeMode m) {
  switch (m) {
    case TlaeMode::kModelRating:
      return "model-rating";
    case TlaeMode::kGoldRating:
      return "gold-rating";
    case TlaeMode::kBoth:
      return "both";
  }
  return "?";
}

TlaeMode parse_tlae_mode(std::string_view name) {
  for (const TlaeMode m : {TlaeMode::kModelRating, TlaeMode::kGoldRating, TlaeMode::kBoth}) {
    if (tlae_mode_name(m) == name) return m;
  }
  throw Error("unknown TLAE mode '" + std::string(name) + "'");
}

const std::vector<std::string>& all_metric_names() {
  static const std::vector<std::string> names{"air",      "mrr-ae",   "tlae", "entail",
                                              "greedy-f1", "cond-nll", "rmse"};
  return names;
}

bool MetricSettings::has(std::string_view metric) const {
  return std::find(enabled.begin(), enabled.end(), metric) != enabled.end();
}

void RunConfig::validate() const {
  if (corpus.path.empty()) {
    if (corpus.users < 1 || corpus.items < 1 || corpus.aspects < 1 || corpus.reviews_per_user < 1) {
      throw Error("corpus sizes must be positive");
    }
  }
  const auto& r = corpus.ratios;
  if (r.train <= 0 || r.validation <= 0 || r.test <= 0 ||
      std::abs(r.train + r.validation + r.test - 1.0) > 1e-9) {
    throw Error("split ratios must be positive and sum to 1");
  }
  if (models.empty()) throw Error("model roster is empty");
  std::set<std::string> names;
  for (const auto& m : models) {
    if (!names.insert(m.name).second) throw Error("duplicate model name '" + m.name + "'");
    if (m.neural()) {
      m.model.validate();
      m.train.validate();
    }
  }
  if (metrics.k == 0) throw Error("k must be at least 1");
  if (metrics.n_explanations == 0) throw Error("n_explanations must be at least 1");
  if (metrics.max_len < 2) throw Error("max_len must be at least 2");
  if (metrics.cond_nll_lambda < 0.0 || metrics.cond_nll_lambda > 1.0) {
    throw Error("cond_nll_lambda must lie in [0, 1]");
  }
  for (const auto& m : metrics.enabled) {
    const auto& all = all_metric_names();
    if (std::find(all.begin(), all.end(), m) == all.end()) {
      throw Error("unknown metric '" + m + "'");
    }
  }
}

const ModelEntry& RunConfig::model(std::string_view name) const {
  for (const auto& m : models) {
    if (m.name == name) return m;
  }
  throw Error("no model named '" + std::string(name) + "' in the roster");
}

void RunConfig::select_models(const std::vector<std::string>& names) {
  std::vector<ModelEntry> picked;
  for (const auto& n : names) picked.push_back(model(n));
  models = std::move(picked);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string RunConfig::canonical_corpus() const {
  std::ostringstream os;
  os << "[corpus]\n";
  if (!corpus.path.empty()) {
    os << "external=" << hex64(fnv1a(read_file(corpus.path))) << "\n";
  } else {
    os << "users=" << corpus.users << "\nitems=" << corpus.items << "\naspects=" << corpus.aspects
       << "\nreviews_per_user=" << corpus.reviews_per_user << "\n";
  }
  os << "train=" << num(corpus.ratios.train) << "\nvalidation=" << num(corpus.ratios.validation)
     << "\ntest=" << num(corpus.ratios.test) << "\n";
  const std::string lex = corpus.lexicon.empty()
                              ? corpus::Lexicon::default_lexicon().serialize()
                              : corpus::Lexicon::load(corpus.lexicon).serialize();
  os << "lexicon=" << hex64(fnv1a(lex)) << "\nseed=" << seeds.corpus << "\n";
  return os.str();
}

std::string RunConfig::canonical_model(const ModelEntry& m) const {
  std::ostringstream os;
  os << "[model." << m.name << "]\ntype=" << model_type_name(m.type) << "\n";
  if (m.neural()) os << m.model.describe() << m.train.describe();
  os << "seed=" << seeds.model << "\n";
  return os.str();
}

std::string RunConfig::canonical_eval() const {
  std::ostringstream os;
  os << "[metrics]\nk=" << metrics.k << "\nn_explanations=" << metrics.n_explanations
     << "\nair_mode=" << air_mode_name(metrics.air_mode)
     << "\ntlae_mode=" << tlae_mode_name(metrics.tlae_mode)
     << "\ncond_nll_lambda=" << num(metrics.cond_nll_lambda) << "\nmax_len=" << metrics.max_len
     << "\nmetrics=";
  for (std::size_t i = 0; i < metrics.enabled.size(); ++i) {
    os << (i ? "," : "") << metrics.enabled[i];
  }
  os << "\n[aux]\n" << metrics.aux.describe() << "seed=" << seeds.eval << "\n";
  return os.str();
}

std::uint64_t RunConfig::corpus_hash() const { return fnv1a(canonical_corpus()); }

std::uint64_t RunConfig::model_hash(const ModelEntry& entry) const {
  return fnv1a(canonical_model(entry), corpus_hash());
}

std::uint64_t RunConfig::aux_hash() const {
  std::ostringstream os;
  os << metrics.aux.describe() << "seed=" << seeds.eval << "\n";
  return fnv1a(os.str(), corpus_hash());
}

std::uint64_t RunConfig::generation_hash(const ModelEntry& entry) const {
  const std::string decode = "n_explanations=" + std::to_string(metrics.n_explanations) +
                             "\nmax_len=" + std::to_string(metrics.max_len) + "\n";
  return fnv1a(decode, model_hash(entry));
}

std::uint64_t RunConfig::hash() const {
  std::string all = canonical_corpus();
  for (const auto& m : models) all += canonical_model(m);
  all += canonical_eval();
  return fnv1a(all);
}

namespace {

class Section {
 public:
  Section(const pt::ptree& tree, std::string name, const std::string& source)
      : tree_(tree), name_(std::move(name)), source_(source) {}

  template <typename T>
  void read(const std::string& key, T& dst) {
    used_.insert(key);
    const auto v = tree_.get_optional<std::string>(key);
    if (!v) return;
    std::istringstream in(*v);
    T parsed{};
    if constexpr (std::is_same_v<T, bool>) {
      std::string s;
      in >> s;
      if (s == "true" || s == "1" || s == "yes") {
        parsed = true;
      } else if (s == "false" || s == "0" || s == "no") {
        parsed = false;
      } else {
        fail(key, *v);
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      parsed = *v;
    } else {
      if (!(in >> parsed) || !(in >> std::ws).eof()) fail(key, *v);
      if constexpr (std::is_unsigned_v<T>) {
        if (v->find('-') != std::string::npos) fail(key, *v);
      }
    }
    dst = parsed;
  }

  void check_unknown() const {
    for (const auto& [key, child] : tree_) {
      if (!used_.count(key)) {
        throw Error(source_ + ": unknown key '" + key + "' in [" + name_ + "]");
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& v) const {
    throw Error(source_ + ": bad value '" + v + "' for " + name_ + "." + key);
  }

  const pt::ptree& tree_;
  std::string name_;
  const std::string& source_;
  std::set<std::string> used_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  return out;
}

}  // namespace

namespace {

// The INI reader drops sections without keys, so headers are checked here.
void check_section_names(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] != '[') continue;
    const auto e = line.find(']', b);
    if (e == std::string::npos) continue;
    const std::string name = line.substr(b + 1, e - b - 1);
    const bool known = name == "run" || name == "seeds" || name == "corpus" ||
                       name == "metrics" || name == "aux" || name.starts_with("model.");
    if (!known) throw Error(source + ":" + std::to_string(n) + ": unknown section [" + name + "]");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& source) {
  check_section_names(text, source);
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig cfg;
  for (const auto& [name, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw Error(source + ": key '" + name + "' outside any section");
    }
    if (name == "run") {
      Section s(body, name, source);
      s.read("out", cfg.out);
      s.read("audit", cfg.audit);
      s.check_unknown();
    } else if (name == "seeds") {
      Section s(body, name, source);
      s.read("corpus", cfg.seeds.corpus);
      s.read("model", cfg.seeds.model);
      s.read("eval", cfg.seeds.eval);
      s.check_unknown();
    } else if (name == "corpus") {
      Section s(body, name, source);
      s.read("users", cfg.corpus.users);
      s.read("items", cfg.corpus.items);
      s.read("aspects", cfg.corpus.aspects);
      s.read("reviews_per_user", cfg.corpus.reviews_per_user);
      s.read("train", cfg.corpus.ratios.train);
      s.read("validation", cfg.corpus.ratios.validation);
      s.read("test", cfg.corpus.ratios.test);
      s.read("lexicon", cfg.corpus.lexicon);
      s.read("path", cfg.corpus.path);
      s.check_unknown();
    } else if (name == "metrics") {
      Section s(body, name, source);
      auto& m = cfg.metrics;
      std::string air = std::string(air_mode_name(m.air_mode));
      std::string tl = std::string(tlae_mode_name(m.tlae_mode));
      std::string list;
      s.read("k", m.k);
      s.read("n_explanations", m.n_explanations);
      s.read("air_mode", air);
      s.read("tlae_mode", tl);
      s.read("cond_nll_lambda", m.cond_nll_lambda);
      s.read("max_len", m.max_len);
      s.read("metrics", list);
      s.check_unknown();
      m.air_mode = parse_air_mode(air);
      m.tlae_mode = parse_tlae_mode(tl);
      if (!list.empty()) m.enabled = split_list(list);
    } else if (name == "aux") {
      Section s(body, name, source);
      auto& a = cfg.metrics.aux;
      s.read("embedding", a.embedding);
      s.read("hidden", a.hidden);
      s.read("epochs", a.epochs);
      s.read("batch_size", a.batch_size);
      s.read("learning_rate", a.learning_rate);
      s.read("patience", a.patience);
      s.check_unknown();
    } else if (name.rfind("model.", 0) == 0) {
      ModelEntry e;
      e.name = name.substr(6);
      if (e.name.empty()) throw Error(source + ": model section without a name");
      Section s(body, name, source);
      std::string type;
      s.read("type", type);
      if (type.empty()) throw Error(source + ": [" + name + "] needs a type");
      e.type = parse_model_type(type);
      if (e.neural()) {
        e.model.architecture = e.type == ModelType::kRecurrent ? models::Architecture::kRecurrent
                                                               : models::Architecture::kTransformer;
        s.read("conditioned", e.model.conditioned);
        s.read("embedding", e.model.embedding);
        s.read("hidden", e.model.hidden);
        s.read("layers", e.model.layers);
        s.read("heads", e.model.heads);
        s.read("max_text_len", e.model.max_text_len);
        s.read("epochs", e.train.epochs);
        s.read("batch_size", e.train.batch_size);
        s.read("learning_rate", e.train.learning_rate);
        s.read("lambda", e.train.lambda);
        s.read("patience", e.train.patience);
        s.read("clip_norm", e.train.clip_norm);
      }
      s.check_unknown();
      cfg.models.push_back(std::move(e));
    } else {
      throw Error(source + ": unknown section [" + name + "]");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config(ss.str(), path.string());
  const auto base = path.parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).lexically_normal();
  };
  resolve(cfg.corpus.lexicon);
  resolve(cfg.corpus.path);
  return cfg;
}

}  // namespace revexp::harness
