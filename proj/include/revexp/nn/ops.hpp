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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "revexp/nn/tape.hpp"
#include "revexp/nn/tensor.hpp"

namespace revexp::nn {

// ---- matrix product -------------------------------------------------------

// a [m x k] * b [k x n], optionally plus a [1 x n] bias broadcast over rows.
Var matmul(Var a, Var b);
Var matmul(Var a, Var b, Var bias);

// ---- embedding lookup ------------------------------------------------------

struct RowRef {
  Var source;
  std::size_t row;
};

// Stacks the selected rows into a new [rows x cols] node. Works on any 2-D
// node, so it doubles as row selection and row concatenation.
Var gather(Var table, std::span<const std::size_t> rows);
Var gather(std::span<const RowRef> rows);

// ---- elementwise -----------------------------------------------------------

// b must match a's shape or be a single row broadcast over a's rows.
Var add(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
Var tanh(Var a);
Var sigmoid(Var a);
Var relu(Var a);

// ---- attention -------------------------------------------------------------

// Queries are stored as batch blocks of query_len rows, keys and values as
// batch blocks of key_len rows. visible[(b * query_len + i) * key_len + j]
// says whether query i of sequence b may attend to key j.
struct AttentionLayout {
  std::size_t batch = 1;
  std::size_t query_len = 1;
  std::size_t key_len = 1;
  std::size_t heads = 1;
  std::vector<std::uint8_t> visible;

  static AttentionLayout full(std::size_t batch, std::size_t query_len, std::size_t key_len,
                              std::size_t heads);
  bool is_visible(std::size_t b, std::size_t i, std::size_t j) const {
    return visible[(b * query_len + i) * key_len + j] != 0;
  }
};

// Softmax attention weights, laid out [batch][head][query][key]. Rows sum to 1
// over visible keys; masked entries are exactly 0.
std::vector<double> attention_weights(const Tensor& q, const Tensor& k,
                                      const AttentionLayout& layout);

// Scaled dot-product multi-head attention over already projected q, k, v.
Var attention(Var q, Var k, Var v, const AttentionLayout& layout);

// ---- recurrent cell --------------------------------------------------------

// Gated recurrent unit step. x [B x E], h [B x H], input_weights [E x 3H],
// state_weights [H x 3H], biases [1 x 3H]; gate blocks ordered reset, update,
// candidate. Returns the next state [B x H].
struct RecurrentWeights {
  Var input_weights;
  Var state_weights;
  Var input_bias;
  Var state_bias;
};
Var recurrent_cell(Var x, Var h, const RecurrentWeights& w);

// ---- layer normalization ---------------------------------------------------

Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);

// ---- losses ----------------------------------------------------------------

// Row-wise softmax of a 2-D tensor.
Tensor softmax_rows(const Tensor& logits);

// Mean over rows with target >= 0 of -log softmax(logits)[row, target].
// target == -1 marks a padded row.
Var softmax_cross_entropy(Var logits, std::span<const int> targets);

// Mean of (pred - target)^2 over all entries of pred.
Var squared_error(Var pred, std::span<const double> target);

// Tape-free forms of the two training losses.
double nll_loss(const Tensor& logits, std::span<const int> targets,
                const std::vector<bool>& pad_mask);
double mse_loss(std::span<const double> pred, std::span<const double> target);

}  // namespace revexp::nn
