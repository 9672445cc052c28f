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

#include <memory>
#include <string>
#include <vector>

#include "revexp/error.hpp"
#include "revexp/models/neural.hpp"
#include "revexp/nn/ops.hpp"

namespace revexp::models {
namespace {

using nn::Var;

// Input rows per example: u, i, [aspect], BOS, w1..wT. User and item see each
// other; everything else attends causally.
class TransformerModel final : public NeuralRecommender {
 public:
  TransformerModel(const ModelConfig& config, ModelDomain domain, std::uint64_t seed)
      : NeuralRecommender(config, std::move(domain), seed) {}

 protected:
  void build(Rng& rng) override {
    const std::size_t e = config_.embedding, h = config_.hidden, v = vocab_size();
    const auto U = static_cast<std::size_t>(domain_.num_users);
    const auto I = static_cast<std::size_t>(domain_.num_items);
    user_emb_ = params_.add("user_emb", {U, e}, nn::Init::kUniform, rng);
    item_emb_ = params_.add("item_emb", {I, e}, nn::Init::kUniform, rng);
    word_emb_ = params_.add("word_emb", {v, e}, nn::Init::kUniform, rng);
    pos_emb_ = params_.add("pos_emb", {prefix() + 1 + config_.max_text_len, e},
                           nn::Init::kUniform, rng);
    for (std::size_t l = 0; l < config_.layers; ++l) {
      const std::string p = "layer" + std::to_string(l) + ".";
      Layer L;
      L.ln1_g = params_.add(p + "ln1_gain", {1, e}, nn::Init::kOnes, rng);
      L.ln1_b = params_.add(p + "ln1_bias", {1, e}, nn::Init::kZeros, rng);
      L.wq = params_.add(p + "wq", {e, e}, nn::Init::kUniform, rng);
      L.wk = params_.add(p + "wk", {e, e}, nn::Init::kUniform, rng);
      L.wv = params_.add(p + "wv", {e, e}, nn::Init::kUniform, rng);
      L.wo = params_.add(p + "wo", {e, e}, nn::Init::kUniform, rng);
      L.bq = params_.add(p + "bq", {1, e}, nn::Init::kZeros, rng);
      L.bk = params_.add(p + "bk", {1, e}, nn::Init::kZeros, rng);
      L.bv = params_.add(p + "bv", {1, e}, nn::Init::kZeros, rng);
      L.bo = params_.add(p + "bo", {1, e}, nn::Init::kZeros, rng);
      L.ln2_g = params_.add(p + "ln2_gain", {1, e}, nn::Init::kOnes, rng);
      L.ln2_b = params_.add(p + "ln2_bias", {1, e}, nn::Init::kZeros, rng);
      L.w1 = params_.add(p + "ff_w1", {e, h}, nn::Init::kUniform, rng);
      L.b1 = params_.add(p + "ff_b1", {1, h}, nn::Init::kZeros, rng);
      L.w2 = params_.add(p + "ff_w2", {h, e}, nn::Init::kUniform, rng);
      L.b2 = params_.add(p + "ff_b2", {1, e}, nn::Init::kZeros, rng);
      layers_.push_back(L);
    }
    final_g_ = params_.add("final_ln_gain", {1, e}, nn::Init::kOnes, rng);
    final_b_ = params_.add("final_ln_bias", {1, e}, nn::Init::kZeros, rng);
    out_w_ = params_.add("out_w", {e, v}, nn::Init::kUniform, rng);
    out_b_ = params_.add("out_b", {1, v}, nn::Init::kZeros, rng);
    rating_w1_ = params_.add("rating_w1", {e, h}, nn::Init::kUniform, rng);
    rating_b1_ = params_.add("rating_b1", {1, h}, nn::Init::kZeros, rng);
    rating_w2_ = params_.add("rating_w2", {h, 1}, nn::Init::kUniform, rng);
    rating_b2_ = params_.add("rating_b2", nn::Tensor({1, 1}, domain_.rating_prior));
  }

  ForwardOutput run(ParamBinder& bind, std::span<const Example> batch) const override {
    const std::size_t B = batch.size(), P = prefix();
    std::size_t len = 0;
    for (const Example& ex : batch) len = std::max(len, P + 1 + ex.words.size());

    const Var users = bind(user_emb_), items = bind(item_emb_), words = bind(word_emb_);
    std::vector<nn::RowRef> rows;
    std::vector<std::size_t> positions;
    rows.reserve(B * len);
    positions.reserve(B * len);
    nn::AttentionLayout layout;
    layout.batch = B;
    layout.query_len = len;
    layout.key_len = len;
    layout.heads = config_.heads;
    layout.visible.assign(B * len * len, 0);
    for (std::size_t b = 0; b < B; ++b) {
      const Example& ex = batch[b];
      const std::size_t valid = P + 1 + ex.words.size();
      rows.push_back({users, static_cast<std::size_t>(ex.user)});
      rows.push_back({items, static_cast<std::size_t>(ex.item)});
      if (config_.conditioned) rows.push_back({words, static_cast<std::size_t>(ex.aspect)});
      rows.push_back({words, static_cast<std::size_t>(corpus::Vocab::kBos)});
      for (const int w : ex.words) rows.push_back({words, static_cast<std::size_t>(w)});
      while (rows.size() < (b + 1) * len) {
        rows.push_back({words, static_cast<std::size_t>(corpus::Vocab::kPad)});
      }
      for (std::size_t t = 0; t < len; ++t) positions.push_back(t);
      for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; j < valid; ++j) {
          if (j < 2 || j <= i) layout.visible[(b * len + i) * len + j] = 1;
        }
      }
    }
    Var x = nn::add(nn::gather(rows), nn::gather(bind(pos_emb_), positions));

    for (const Layer& L : layers_) {
      const Var n1 = nn::layer_norm(x, bind(L.ln1_g), bind(L.ln1_b));
      const Var q = nn::matmul(n1, bind(L.wq), bind(L.bq));
      const Var k = nn::matmul(n1, bind(L.wk), bind(L.bk));
      const Var v = nn::matmul(n1, bind(L.wv), bind(L.bv));
      const Var a = nn::attention(q, k, v, layout);
      x = nn::add(x, nn::matmul(a, bind(L.wo), bind(L.bo)));
      const Var n2 = nn::layer_norm(x, bind(L.ln2_g), bind(L.ln2_b));
      const Var f = nn::relu(nn::matmul(n2, bind(L.w1), bind(L.b1)));
      x = nn::add(x, nn::matmul(f, bind(L.w2), bind(L.b2)));
    }
    const Var hid = nn::layer_norm(x, bind(final_g_), bind(final_b_));

    ForwardOutput out;
    std::vector<std::size_t> scored, item_rows;
    out.offsets.push_back(0);
    for (std::size_t b = 0; b < B; ++b) {
      const Example& ex = batch[b];
      for (std::size_t t = 0; t <= ex.words.size(); ++t) {
        scored.push_back(b * len + P + t);
        out.targets.push_back(t < ex.words.size() ? ex.words[t] : corpus::Vocab::kEos);
      }
      out.offsets.push_back(out.targets.size());
      item_rows.push_back(b * len + 1);
    }
    out.logits = nn::matmul(nn::gather(hid, scored), bind(out_w_), bind(out_b_));
    const Var r = nn::tanh(nn::matmul(nn::gather(hid, item_rows), bind(rating_w1_),
                                      bind(rating_b1_)));
    out.rating = nn::matmul(r, bind(rating_w2_), bind(rating_b2_));
    return out;
  }

 private:
  struct Layer {
    nn::ParamId ln1_g, ln1_b, wq, wk, wv, wo, bq, bk, bv, bo, ln2_g, ln2_b, w1, b1, w2, b2;
  };

  std::size_t prefix() const { return config_.conditioned ? 3 : 2; }

  nn::ParamId user_emb_ = 0, item_emb_ = 0, word_emb_ = 0, pos_emb_ = 0;
  std::vector<Layer> layers_;
  nn::ParamId final_g_ = 0, final_b_ = 0, out_w_ = 0, out_b_ = 0;
  nn::ParamId rating_w1_ = 0, rating_b1_ = 0, rating_w2_ = 0, rating_b2_ = 0;
};

}  // namespace

std::unique_ptr<NeuralRecommender> make_transformer(const ModelConfig& config, ModelDomain domain,
                                                    std::uint64_t seed) {
  return std::unique_ptr<NeuralRecommender>(
      new TransformerModel(config, std::move(domain), seed));
}

}  // namespace revexp::models
