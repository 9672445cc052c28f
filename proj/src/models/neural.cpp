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

#include "revexp/models/neural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "revexp/corpus/text.hpp"
#include "revexp/error.hpp"
#include "revexp/nn/checkpoint.hpp"
#include "revexp/nn/ops.hpp"

namespace revexp::models {

std::unique_ptr<NeuralRecommender> make_recurrent(const ModelConfig&, ModelDomain, std::uint64_t);
std::unique_ptr<NeuralRecommender> make_transformer(const ModelConfig&, ModelDomain,
                                                    std::uint64_t);

std::string_view architecture_name(Architecture a) {
  return a == Architecture::kRecurrent ? "recurrent" : "transformer";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "recurrent") return Architecture::kRecurrent;
  if (name == "transformer") return Architecture::kTransformer;
  throw Error("unknown architecture '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (embedding == 0 || hidden == 0 || layers == 0 || heads == 0 || max_text_len == 0) {
    throw Error("model sizes must be positive");
  }
  if (architecture == Architecture::kTransformer && embedding % heads != 0) {
    throw Error("embedding size must be divisible by the head count");
  }
  if (conditioned && architecture != Architecture::kTransformer) {
    throw Error("only the transformer has a conditioned variant");
  }
}

std::string ModelConfig::describe() const {
  std::ostringstream os;
  os << "architecture=" << architecture_name(architecture) << "\n"
     << "conditioned=" << (conditioned ? 1 : 0) << "\n"
     << "embedding=" << embedding << "\n"
     << "hidden=" << hidden << "\n"
     << "layers=" << layers << "\n"
     << "heads=" << heads << "\n"
     << "max_text_len=" << max_text_len << "\n";
  return os.str();
}

ModelDomain ModelDomain::from_corpus(const corpus::Corpus& c) {
  if (c.train.empty()) throw Error("corpus has an empty train split");
  ModelDomain d;
  d.vocab = c.vocab;
  for (const corpus::Split s :
       {corpus::Split::kTrain, corpus::Split::kValidation, corpus::Split::kTest}) {
    for (const auto& r : c.split(s)) {
      d.num_users = std::max(d.num_users, r.user + 1);
      d.num_items = std::max(d.num_items, r.item + 1);
    }
  }
  if (c.truth) {
    d.num_users = std::max(d.num_users, c.truth->world.num_users);
    d.num_items = std::max(d.num_items, c.truth->world.num_items);
  }
  d.seen_users.assign(static_cast<std::size_t>(d.num_users), false);
  d.seen_items.assign(static_cast<std::size_t>(d.num_items), false);
  double sum = 0.0;
  for (const auto& r : c.train) {
    d.seen_users[static_cast<std::size_t>(r.user)] = true;
    d.seen_items[static_cast<std::size_t>(r.item)] = true;
    sum += r.rating;
  }
  d.rating_prior = sum / static_cast<double>(c.train.size());
  return d;
}

ParamBinder::ParamBinder(nn::Tape& tape, nn::ParamStore& store)
    : tape_(tape), mutable_store_(&store), store_(&store), bound_(store.size()) {}

ParamBinder::ParamBinder(nn::Tape& tape, const nn::ParamStore& store)
    : tape_(tape), store_(&store), bound_(store.size()) {}

nn::Var ParamBinder::operator()(nn::ParamId id) {
  nn::Var& v = bound_.at(id);
  if (!v.valid()) {
    v = mutable_store_ ? tape_.param(*mutable_store_, id) : tape_.param(*store_, id);
  }
  return v;
}

nn::Var joint_loss(nn::Var logits, std::span<const int> targets, nn::Var rating,
                   std::span<const double> gold_ratings, double lambda, LossParts* parts) {
  if (targets.empty() || gold_ratings.empty()) throw Error("joint loss of an empty batch");
  if (lambda < 0.0) throw Error("rating loss weight must be non-negative");
  nn::Var nll = nn::softmax_cross_entropy(logits, targets);
  nn::Var mse = nn::squared_error(rating, gold_ratings);
  nn::Var total = nn::add(nll, nn::scale(mse, lambda));
  if (parts) {
    parts->nll = nll.value()[0];
    parts->mse = mse.value()[0];
    parts->total = total.value()[0];
  }
  return total;
}

NeuralRecommender::NeuralRecommender(const ModelConfig& config, ModelDomain domain,
                                     std::uint64_t seed)
    : config_(config), domain_(std::move(domain)), seed_(seed) {
  config_.validate();
  if (domain_.num_users <= 0 || domain_.num_items <= 0) throw Error("model needs users and items");
}

std::unique_ptr<NeuralRecommender> NeuralRecommender::create(const ModelConfig& config,
                                                             ModelDomain domain,
                                                             std::uint64_t seed) {
  config.validate();
  std::unique_ptr<NeuralRecommender> m =
      config.architecture == Architecture::kRecurrent
          ? make_recurrent(config, std::move(domain), seed)
          : make_transformer(config, std::move(domain), seed);
  Rng rng(seed);
  m->build(rng);
  return m;
}

std::string NeuralRecommender::kind() const {
  std::string k(architecture_name(config_.architecture));
  if (config_.conditioned) k += "_cond";
  return k;
}

void NeuralRecommender::check_ids(int user, int item) const {
  const bool user_ok = user >= 0 && user < domain_.num_users &&
                       domain_.seen_users[static_cast<std::size_t>(user)];
  const bool item_ok = item >= 0 && item < domain_.num_items &&
                       domain_.seen_items[static_cast<std::size_t>(item)];
  if (!user_ok) throw Error("cold-start id: user " + std::to_string(user));
  if (!item_ok) throw Error("cold-start id: item " + std::to_string(item));
}

void NeuralRecommender::check_batch(std::span<const Example> batch) const {
  if (batch.empty()) throw Error("empty batch");
  for (const Example& e : batch) {
    check_ids(e.user, e.item);
    if (e.words.size() > config_.max_text_len) {
      throw Error("text of " + std::to_string(e.words.size()) + " words exceeds max_text_len " +
                  std::to_string(config_.max_text_len));
    }
    if (config_.conditioned && e.aspect < 0) throw Error("conditioned model needs an aspect");
  }
}

Example NeuralRecommender::encode(const corpus::Review& review) const {
  Context ctx{review.user, review.item, review.aspect};
  Example e = encode(ctx, review.tokens);
  e.rating = review.rating;
  return e;
}

Example NeuralRecommender::encode(const Context& ctx, std::span<const std::string> words) const {
  Example e;
  e.user = ctx.user;
  e.item = ctx.item;
  if (config_.conditioned) {
    if (!ctx.aspect) throw Error("conditioned model needs an aspect");
    e.aspect = domain_.vocab.id(*ctx.aspect);
  }
  e.words = domain_.vocab.encode(strip_eos(words), false);
  return e;
}

ForwardOutput NeuralRecommender::forward(nn::Tape& tape, std::span<const Example> batch) {
  check_batch(batch);
  ParamBinder bind(tape, params_);
  return run(bind, batch);
}

ForwardOutput NeuralRecommender::forward(nn::Tape& tape, std::span<const Example> batch) const {
  check_batch(batch);
  ParamBinder bind(tape, params_);
  return run(bind, batch);
}

namespace {

double log_sum_exp(std::span<const double> row) {
  const double m = *std::max_element(row.begin(), row.end());
  double s = 0.0;
  for (const double x : row) s += std::exp(x - m);
  return m + std::log(s);
}

bool generatable(int id) { return id == corpus::Vocab::kEos || id >= corpus::Vocab::kReserved; }

}  // namespace

std::vector<double> NeuralRecommender::example_log_likelihoods(
    std::span<const Example> batch) const {
  nn::Tape tape(false);
  const ForwardOutput out = forward(tape, batch);
  const nn::Tensor& logits = out.logits.value();
  std::vector<double> ll(batch.size(), 0.0);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    for (std::size_t r = out.offsets[b]; r < out.offsets[b + 1]; ++r) {
      const auto row = logits.row(r);
      ll[b] += row[static_cast<std::size_t>(out.targets[r])] - log_sum_exp(row);
    }
  }
  return ll;
}

double NeuralRecommender::log_likelihood(const Context& ctx,
                                         std::span<const std::string> words) const {
  const Example e = encode(ctx, words);
  return example_log_likelihoods({&e, 1}).front();
}

std::vector<double> NeuralRecommender::log_likelihoods(
    const Context& ctx, std::span<const corpus::Tokens> texts) const {
  if (texts.empty()) return {};
  std::vector<Example> batch;
  batch.reserve(texts.size());
  for (const auto& t : texts) batch.push_back(encode(ctx, t));
  return example_log_likelihoods(batch);
}

double NeuralRecommender::raw_rating(int user, int item) const {
  Example e;
  e.user = user;
  e.item = item;
  if (config_.conditioned) e.aspect = corpus::Vocab::kUnk;
  nn::Tape tape(false);
  return forward(tape, {&e, 1}).rating.value()[0];
}

double NeuralRecommender::predict_rating(int user, int item) const {
  return std::clamp(raw_rating(user, item), 1.0, 5.0);
}

corpus::Tokens NeuralRecommender::generate(const Context& ctx,
                                           const DecodeOptions& options) const {
  if (options.max_len < 2) throw Error("max_len must be at least 2");
  Example e = encode(ctx, {});
  Rng rng(options.seed);
  const std::size_t limit = std::min(options.max_len - 1, config_.max_text_len);
  corpus::Tokens words;
  while (words.size() < limit) {
    nn::Tape tape(false);
    const ForwardOutput out = forward(tape, {&e, 1});
    const auto row = out.logits.value().row(out.offsets[1] - 1);
    int next = corpus::Vocab::kEos;
    if (options.sample) {
      const double lse = log_sum_exp(row);
      double u = rng.uniform();
      for (std::size_t id = 0; id < row.size(); ++id) {
        if (!generatable(static_cast<int>(id))) continue;
        next = static_cast<int>(id);
        u -= std::exp(row[id] - lse);
        if (u < 0.0) break;
      }
    } else {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t id = 0; id < row.size(); ++id) {
        if (generatable(static_cast<int>(id)) && row[id] > best) {
          best = row[id];
          next = static_cast<int>(id);
        }
      }
    }
    if (next == corpus::Vocab::kEos) break;
    e.words.push_back(next);
    words.push_back(domain_.vocab.token(next));
  }
  words.emplace_back(corpus::Vocab::kEosToken);
  return words;
}

namespace {

std::string bits(const std::vector<bool>& v) {
  std::string s;
  for (const bool b : v) s += b ? '1' : '0';
  return s;
}

std::vector<bool> parse_bits(const std::string& s) {
  std::vector<bool> v;
  for (const char c : s) {
    if (c != '0' && c != '1') throw Error("bad id mask in model metadata");
    v.push_back(c == '1');
  }
  return v;
}

}  // namespace

std::string NeuralRecommender::metadata() const {
  std::ostringstream os;
  os << config_.describe();
  os.precision(17);
  os << "users=" << domain_.num_users << "\n"
     << "items=" << domain_.num_items << "\n"
     << "seen_users=" << bits(domain_.seen_users) << "\n"
     << "seen_items=" << bits(domain_.seen_items) << "\n"
     << "rating_prior=" << std::hexfloat << domain_.rating_prior << std::defaultfloat << "\n"
     << "vocab=";
  const auto& toks = domain_.vocab.tokens();
  for (std::size_t i = corpus::Vocab::kReserved; i < toks.size(); ++i) {
    if (i > corpus::Vocab::kReserved) os << ' ';
    os << toks[i];
  }
  os << "\n";
  return os.str();
}

void save_model(const std::filesystem::path& path, const NeuralRecommender& model,
                std::uint64_t config_hash) {
  nn::CheckpointHeader h;
  h.seed = model.seed();
  h.step = model.params().step();
  h.config_hash = config_hash;
  h.metadata = model.metadata();
  nn::save_checkpoint(path, h, model.params());
}

std::unique_ptr<NeuralRecommender> load_model(const std::filesystem::path& path,
                                              std::uint64_t* config_hash) {
  nn::Checkpoint ck = nn::load_checkpoint(path);
  std::unordered_map<std::string, std::string> kv;
  std::istringstream in(ck.header.metadata);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw Error(path.string() + ": checkpoint metadata lacks '" + key + "'");
    return it->second;
  };
  auto num = [&](const std::string& key) {
    return static_cast<std::size_t>(std::stoull(get(key)));
  };
  ModelConfig cfg;
  cfg.architecture = parse_architecture(get("architecture"));
  cfg.conditioned = get("conditioned") == "1";
  cfg.embedding = num("embedding");
  cfg.hidden = num("hidden");
  cfg.layers = num("layers");
  cfg.heads = num("heads");
  cfg.max_text_len = num("max_text_len");

  ModelDomain d;
  d.num_users = static_cast<int>(num("users"));
  d.num_items = static_cast<int>(num("items"));
  d.seen_users = parse_bits(get("seen_users"));
  d.seen_items = parse_bits(get("seen_items"));
  d.rating_prior = std::strtod(get("rating_prior").c_str(), nullptr);
  std::vector<std::vector<std::string>> texts{corpus::tokenize(get("vocab"))};
  d.vocab = corpus::Vocab::from_texts(texts);

  auto model = NeuralRecommender::create(cfg, std::move(d), ck.header.seed);
  nn::ParamStore& p = model->params();
  if (p.size() != ck.params.size()) throw Error(path.string() + ": parameter count mismatch");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].name != ck.params[i].name || !p[i].value.same_shape(ck.params[i].value)) {
      throw Error(path.string() + ": parameter '" + ck.params[i].name +
                  "' does not match the architecture");
    }
    p[i].value = ck.params[i].value;
  }
  p.set_step(ck.header.step);
  if (config_hash) *config_hash = ck.header.config_hash;
  return model;
}

}  // namespace revexp::models
