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

// Gated recurrent decoder started from tanh(W_u u + W_i i + b).
class RecurrentModel final : public NeuralRecommender {
 public:
  RecurrentModel(const ModelConfig& config, ModelDomain domain, std::uint64_t seed)
      : NeuralRecommender(config, std::move(domain), seed) {}

 protected:
  void build(Rng& rng) override {
    const std::size_t e = config_.embedding, h = config_.hidden, v = vocab_size();
    const auto U = static_cast<std::size_t>(domain_.num_users);
    const auto I = static_cast<std::size_t>(domain_.num_items);
    user_emb_ = params_.add("user_emb", {U, e}, nn::Init::kUniform, rng);
    item_emb_ = params_.add("item_emb", {I, e}, nn::Init::kUniform, rng);
    word_emb_ = params_.add("word_emb", {v, e}, nn::Init::kUniform, rng);
    init_u_ = params_.add("init_wu", {e, h}, nn::Init::kUniform, rng);
    init_i_ = params_.add("init_wi", {e, h}, nn::Init::kUniform, rng);
    init_b_ = params_.add("init_b", {1, h}, nn::Init::kZeros, rng);
    for (std::size_t l = 0; l < config_.layers; ++l) {
      const std::string p = "gru" + std::to_string(l) + ".";
      const std::size_t in = l == 0 ? e : h;
      Cell c;
      c.wx = params_.add(p + "wx", {in, 3 * h}, nn::Init::kUniform, rng);
      c.wh = params_.add(p + "wh", {h, 3 * h}, nn::Init::kUniform, rng);
      c.bx = params_.add(p + "bx", {1, 3 * h}, nn::Init::kZeros, rng);
      c.bh = params_.add(p + "bh", {1, 3 * h}, nn::Init::kZeros, rng);
      cells_.push_back(c);
    }
    out_w_ = params_.add("out_w", {h, v}, nn::Init::kUniform, rng);
    out_b_ = params_.add("out_b", {1, v}, nn::Init::kZeros, rng);
    rating_u_ = params_.add("rating_wu", {e, h}, nn::Init::kUniform, rng);
    rating_i_ = params_.add("rating_wi", {e, h}, nn::Init::kUniform, rng);
    rating_b1_ = params_.add("rating_b1", {1, h}, nn::Init::kZeros, rng);
    rating_w2_ = params_.add("rating_w2", {h, 1}, nn::Init::kUniform, rng);
    rating_b2_ = params_.add("rating_b2", nn::Tensor({1, 1}, domain_.rating_prior));
  }

  ForwardOutput run(ParamBinder& bind, std::span<const Example> batch) const override {
    const std::size_t B = batch.size();
    std::size_t steps = 0;
    std::vector<std::size_t> user_rows, item_rows;
    for (const Example& ex : batch) {
      steps = std::max(steps, ex.words.size() + 1);
      user_rows.push_back(static_cast<std::size_t>(ex.user));
      item_rows.push_back(static_cast<std::size_t>(ex.item));
    }
    const Var u = nn::gather(bind(user_emb_), user_rows);
    const Var i = nn::gather(bind(item_emb_), item_rows);
    const Var h0 =
        nn::tanh(nn::add(nn::matmul(u, bind(init_u_)), nn::matmul(i, bind(init_i_), bind(init_b_))));
    std::vector<Var> state(cells_.size(), h0);
    std::vector<nn::RecurrentWeights> weights;
    for (const Cell& c : cells_) {
      weights.push_back({bind(c.wx), bind(c.wh), bind(c.bx), bind(c.bh)});
    }

    const Var words = bind(word_emb_);
    std::vector<Var> top;
    std::vector<std::size_t> ids(B);
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t b = 0; b < B; ++b) {
        const auto& w = batch[b].words;
        const int id = t == 0 ? corpus::Vocab::kBos
                              : (t - 1 < w.size() ? w[t - 1] : corpus::Vocab::kPad);
        ids[b] = static_cast<std::size_t>(id);
      }
      Var x = nn::gather(words, ids);
      for (std::size_t l = 0; l < cells_.size(); ++l) {
        state[l] = nn::recurrent_cell(x, state[l], weights[l]);
        x = state[l];
      }
      top.push_back(x);
    }

    ForwardOutput out;
    std::vector<nn::RowRef> scored;
    out.offsets.push_back(0);
    for (std::size_t b = 0; b < B; ++b) {
      const auto& w = batch[b].words;
      for (std::size_t t = 0; t <= w.size(); ++t) {
        scored.push_back({top[t], b});
        out.targets.push_back(t < w.size() ? w[t] : corpus::Vocab::kEos);
      }
      out.offsets.push_back(out.targets.size());
    }
    out.logits = nn::matmul(nn::gather(scored), bind(out_w_), bind(out_b_));
    const Var r = nn::tanh(nn::add(nn::matmul(u, bind(rating_u_)),
                                   nn::matmul(i, bind(rating_i_), bind(rating_b1_))));
    out.rating = nn::matmul(r, bind(rating_w2_), bind(rating_b2_));
    return out;
  }

 private:
  struct Cell {
    nn::ParamId wx, wh, bx, bh;
  };

  nn::ParamId user_emb_ = 0, item_emb_ = 0, word_emb_ = 0;
  nn::ParamId init_u_ = 0, init_i_ = 0, init_b_ = 0;
  std::vector<Cell> cells_;
  nn::ParamId out_w_ = 0, out_b_ = 0;
  nn::ParamId rating_u_ = 0, rating_i_ = 0, rating_b1_ = 0, rating_w2_ = 0, rating_b2_ = 0;
};

}  // namespace

std::unique_ptr<NeuralRecommender> make_recurrent(const ModelConfig& config, ModelDomain domain,
                                                  std::uint64_t seed) {
  return std::unique_ptr<NeuralRecommender>(new RecurrentModel(config, std::move(domain), seed));
}

}  // namespace revexp::models
