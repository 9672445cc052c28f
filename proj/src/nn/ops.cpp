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

#include "revexp/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "revexp/error.hpp"
#include "revexp/nn/kernels.hpp"

namespace revexp::nn {
namespace {

Tape& tape_of(Var v) {
  if (!v.valid()) throw Error("use of an unbound tape variable");
  return *v.tape();
}

Tape& common_tape(std::initializer_list<Var> vars) {
  Tape* t = nullptr;
  for (const Var& v : vars) {
    Tape& vt = tape_of(v);
    if (t && t != &vt) throw Error("variables from different tapes");
    t = &vt;
  }
  return *t;
}

void require_matrix(const Tensor& t, const char* what) {
  if (t.rank() > 2) throw Error(std::string(what) + " must be rank 1 or 2, got " + t.shape_string());
}

double sigmoid_scalar(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Applies f elementwise; df maps (input, output) to the local derivative.
template <typename F, typename DF>
Var unary(Var a, F f, DF df) {
  Tape& tape = tape_of(a);
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  const std::size_t ia = a.id();
  return tape.push(OpKind::kElementwise, std::move(y), {ia},
                   [ia, df](Tape& t, std::size_t self) {
                     if (!t.requires_grad(ia)) return;
                     const Tensor& g = t.output_grad(self);
                     const Tensor& xin = t.value(ia);
                     const Tensor& yout = t.value(self);
                     Tensor& ga = t.grad_buffer(ia);
                     for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * df(xin[i], yout[i]);
                   });
}

}  // namespace

// ---- matrix product -------------------------------------------------------

Var matmul(Var a, Var b) { return matmul(a, b, Var()); }

Var matmul(Var a, Var b, Var bias) {
  Tape& tape = bias.valid() ? common_tape({a, b, bias}) : common_tape({a, b});
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_matrix(av, "matmul lhs");
  require_matrix(bv, "matmul rhs");
  const std::size_t m = av.rows(), k = av.cols(), n = bv.cols();
  if (bv.rows() != k) {
    throw Error("matmul shape mismatch " + av.shape_string() + " * " + bv.shape_string());
  }
  Tensor out = Tensor::matrix(m, n);
  kernels::gemm_nn(m, n, k, av.values(), bv.values(), out.values(), false);
  std::vector<std::size_t> inputs{a.id(), b.id()};
  if (bias.valid()) {
    const Tensor& bb = bias.value();
    if (bb.size() != n) throw Error("matmul bias must have " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < m; ++i) {
      auto r = out.row(i);
      for (std::size_t j = 0; j < n; ++j) r[j] += bb[j];
    }
    inputs.push_back(bias.id());
  }
  const std::size_t ia = a.id(), ib = b.id();
  const bool has_bias = bias.valid();
  const std::size_t ic = has_bias ? bias.id() : 0;
  return tape.push(OpKind::kMatMul, std::move(out), std::move(inputs),
                   [=](Tape& t, std::size_t self) {
                     const Tensor& g = t.output_grad(self);
                     if (t.requires_grad(ia)) {
                       kernels::gemm_nt(m, k, n, g.values(), t.value(ib).values(),
                                        t.grad_buffer(ia).values(), true);
                     }
                     if (t.requires_grad(ib)) {
                       kernels::gemm_tn(k, n, m, t.value(ia).values(), g.values(),
                                        t.grad_buffer(ib).values(), true);
                     }
                     if (has_bias && t.requires_grad(ic)) {
                       Tensor& gb = t.grad_buffer(ic);
                       for (std::size_t i = 0; i < m; ++i) {
                         for (std::size_t j = 0; j < n; ++j) gb[j] += g(i, j);
                       }
                     }
                   });
}

// ---- embedding lookup ------------------------------------------------------

Var gather(Var table, std::span<const std::size_t> rows) {
  std::vector<RowRef> refs;
  refs.reserve(rows.size());
  for (const std::size_t r : rows) refs.push_back({table, r});
  return gather(refs);
}

Var gather(std::span<const RowRef> rows) {
  if (rows.empty()) throw Error("gather needs at least one row");
  Tape& tape = tape_of(rows.front().source);
  const std::size_t cols = rows.front().source.value().cols();
  std::vector<std::size_t> inputs;
  std::vector<std::pair<std::size_t, std::size_t>> plan;  // (node id, row)
  plan.reserve(rows.size());
  Tensor out = Tensor::matrix(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Var src = rows[i].source;
    if (src.tape() != &tape) throw Error("variables from different tapes");
    const Tensor& sv = src.value();
    require_matrix(sv, "gather source");
    if (sv.cols() != cols) throw Error("gather sources disagree on column count");
    if (rows[i].row >= sv.rows()) {
      throw Error("gather row " + std::to_string(rows[i].row) + " out of range for " +
                  sv.shape_string());
    }
    std::copy_n(sv.row(rows[i].row).begin(), cols, out.row(i).begin());
    if (std::find(inputs.begin(), inputs.end(), src.id()) == inputs.end()) {
      inputs.push_back(src.id());
    }
    plan.emplace_back(src.id(), rows[i].row);
  }
  return tape.push(OpKind::kGather, std::move(out), std::move(inputs),
                   [plan = std::move(plan), cols](Tape& t, std::size_t self) {
                     const Tensor& g = t.output_grad(self);
                     for (std::size_t i = 0; i < plan.size(); ++i) {
                       const auto [node, r] = plan[i];
                       if (!t.requires_grad(node)) continue;
                       auto dst = t.grad_buffer(node).row(r);
                       const auto src = g.row(i);
                       for (std::size_t j = 0; j < cols; ++j) dst[j] += src[j];
                     }
                   });
}

// ---- elementwise -----------------------------------------------------------

Var add(Var a, Var b) {
  Tape& tape = common_tape({a, b});
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const bool broadcast = !av.same_shape(bv);
  if (broadcast && !(bv.size() == av.cols() && av.rank() <= 2)) {
    throw Error("add shape mismatch " + av.shape_string() + " + " + bv.shape_string());
  }
  Tensor out = av;
  const std::size_t cols = av.cols();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += broadcast ? bv[i % cols] : bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.push(OpKind::kElementwise, std::move(out), {ia, ib},
                   [=](Tape& t, std::size_t self) {
                     const Tensor& g = t.output_grad(self);
                     if (t.requires_grad(ia)) {
                       Tensor& ga = t.grad_buffer(ia);
                       for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                     }
                     if (t.requires_grad(ib)) {
                       Tensor& gb = t.grad_buffer(ib);
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         gb[broadcast ? i % cols : i] += g[i];
                       }
                     }
                   });
}

Var mul(Var a, Var b) {
  Tape& tape = common_tape({a, b});
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (!av.same_shape(bv)) {
    throw Error("mul shape mismatch " + av.shape_string() + " * " + bv.shape_string());
  }
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.push(OpKind::kElementwise, std::move(out), {ia, ib},
                   [=](Tape& t, std::size_t self) {
                     const Tensor& g = t.output_grad(self);
                     if (t.requires_grad(ia)) {
                       Tensor& ga = t.grad_buffer(ia);
                       const Tensor& bval = t.value(ib);
                       for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bval[i];
                     }
                     if (t.requires_grad(ib)) {
                       Tensor& gb = t.grad_buffer(ib);
                       const Tensor& aval = t.value(ia);
                       for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * aval[i];
                     }
                   });
}

Var scale(Var a, double factor) {
  return unary(
      a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Var tanh(Var a) {
  return unary(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var sigmoid(Var a) {
  return unary(a, sigmoid_scalar, [](double, double y) { return y * (1.0 - y); });
}

Var relu(Var a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

// ---- attention -------------------------------------------------------------

AttentionLayout AttentionLayout::full(std::size_t batch, std::size_t query_len,
                                      std::size_t key_len, std::size_t heads) {
  AttentionLayout l{batch, query_len, key_len, heads, {}};
  l.visible.assign(batch * query_len * key_len, 1);
  return l;
}

namespace {

void validate_layout(const Tensor& q, const Tensor& k, const AttentionLayout& l) {
  if (l.heads == 0 || q.cols() % l.heads != 0) {
    throw Error("attention width " + std::to_string(q.cols()) + " not divisible by heads");
  }
  if (q.rows() != l.batch * l.query_len || k.rows() != l.batch * l.key_len ||
      k.cols() != q.cols()) {
    throw Error("attention inputs do not match layout");
  }
  if (l.visible.size() != l.batch * l.query_len * l.key_len) {
    throw Error("attention mask has wrong size");
  }
  for (std::size_t b = 0; b < l.batch; ++b) {
    for (std::size_t i = 0; i < l.query_len; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < l.key_len && !any; ++j) any = l.is_visible(b, i, j);
      if (!any) throw Error("attention query row with no visible key");
    }
  }
}

}  // namespace

std::vector<double> attention_weights(const Tensor& q, const Tensor& k,
                                      const AttentionLayout& l) {
  validate_layout(q, k, l);
  const std::size_t d = q.cols(), dh = d / l.heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<double> p(l.batch * l.heads * l.query_len * l.key_len, 0.0);
  for (std::size_t b = 0; b < l.batch; ++b) {
    for (std::size_t h = 0; h < l.heads; ++h) {
      for (std::size_t i = 0; i < l.query_len; ++i) {
        double* pr = p.data() + ((b * l.heads + h) * l.query_len + i) * l.key_len;
        const double* qi = q.row(b * l.query_len + i).data() + h * dh;
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < l.key_len; ++j) {
          if (!l.is_visible(b, i, j)) continue;
          const double* kj = k.row(b * l.key_len + j).data() + h * dh;
          double s = 0.0;
          for (std::size_t c = 0; c < dh; ++c) s += qi[c] * kj[c];
          pr[j] = s * inv_sqrt;
          mx = std::max(mx, pr[j]);
        }
        double z = 0.0;
        for (std::size_t j = 0; j < l.key_len; ++j) {
          if (!l.is_visible(b, i, j)) continue;
          pr[j] = std::exp(pr[j] - mx);
          z += pr[j];
        }
        for (std::size_t j = 0; j < l.key_len; ++j) pr[j] /= z;
      }
    }
  }
  return p;
}

Var attention(Var q, Var k, Var v, const AttentionLayout& layout) {
  Tape& tape = common_tape({q, k, v});
  const Tensor& qv = q.value();
  const Tensor& kv = k.value();
  const Tensor& vv = v.value();
  if (!vv.same_shape(kv)) throw Error("attention keys and values must share a shape");
  std::vector<double> p = attention_weights(qv, kv, layout);
  const AttentionLayout& l = layout;
  const std::size_t d = qv.cols(), dh = d / l.heads;

  Tensor out = Tensor::matrix(qv.rows(), d);
  for (std::size_t b = 0; b < l.batch; ++b) {
    for (std::size_t h = 0; h < l.heads; ++h) {
      for (std::size_t i = 0; i < l.query_len; ++i) {
        const double* pr = p.data() + ((b * l.heads + h) * l.query_len + i) * l.key_len;
        double* oi = out.row(b * l.query_len + i).data() + h * dh;
        for (std::size_t j = 0; j < l.key_len; ++j) {
          if (pr[j] == 0.0) continue;
          const double* vj = vv.row(b * l.key_len + j).data() + h * dh;
          for (std::size_t c = 0; c < dh; ++c) oi[c] += pr[j] * vj[c];
        }
      }
    }
  }

  const std::size_t iq = q.id(), ik = k.id(), iv = v.id();
  return tape.push(
      OpKind::kAttention, std::move(out), {iq, ik, iv},
      [p = std::move(p), batch = l.batch, heads = l.heads, lq = l.query_len, lk = l.key_len, d,
       dh, iq, ik, iv](Tape& t, std::size_t self) {
        const Tensor& g = t.output_grad(self);
        const Tensor& qv = t.value(iq);
        const Tensor& kv = t.value(ik);
        const Tensor& vv = t.value(iv);
        const bool need_q = t.requires_grad(iq), need_k = t.requires_grad(ik),
                   need_v = t.requires_grad(iv);
        Tensor* gq = need_q ? &t.grad_buffer(iq) : nullptr;
        Tensor* gk = need_k ? &t.grad_buffer(ik) : nullptr;
        Tensor* gv = need_v ? &t.grad_buffer(iv) : nullptr;
        const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
        std::vector<double> dp(lk), ds(lk);
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t h = 0; h < heads; ++h) {
            for (std::size_t i = 0; i < lq; ++i) {
              const double* pr = p.data() + ((b * heads + h) * lq + i) * lk;
              const double* gi = g.row(b * lq + i).data() + h * dh;
              double dot = 0.0;
              for (std::size_t j = 0; j < lk; ++j) {
                dp[j] = 0.0;
                if (pr[j] == 0.0) continue;
                const double* vj = vv.row(b * lk + j).data() + h * dh;
                for (std::size_t c = 0; c < dh; ++c) dp[j] += gi[c] * vj[c];
                dot += dp[j] * pr[j];
                if (gv) {
                  double* gvj = gv->row(b * lk + j).data() + h * dh;
                  for (std::size_t c = 0; c < dh; ++c) gvj[c] += pr[j] * gi[c];
                }
              }
              for (std::size_t j = 0; j < lk; ++j) ds[j] = pr[j] * (dp[j] - dot) * inv_sqrt;
              const double* qi = qv.row(b * lq + i).data() + h * dh;
              double* gqi = gq ? gq->row(b * lq + i).data() + h * dh : nullptr;
              for (std::size_t j = 0; j < lk; ++j) {
                if (ds[j] == 0.0) continue;
                const double* kj = kv.row(b * lk + j).data() + h * dh;
                if (gqi) {
                  for (std::size_t c = 0; c < dh; ++c) gqi[c] += ds[j] * kj[c];
                }
                if (gk) {
                  double* gkj = gk->row(b * lk + j).data() + h * dh;
                  for (std::size_t c = 0; c < dh; ++c) gkj[c] += ds[j] * qi[c];
                }
              }
            }
          }
        }
        (void)d;
      });
}

// ---- recurrent cell --------------------------------------------------------

Var recurrent_cell(Var x, Var h, const RecurrentWeights& w) {
  Tape& tape = common_tape({x, h, w.input_weights, w.state_weights, w.input_bias, w.state_bias});
  const Tensor& xv = x.value();
  const Tensor& hv = h.value();
  const Tensor& wx = w.input_weights.value();
  const Tensor& wh = w.state_weights.value();
  const std::size_t batch = xv.rows(), in = xv.cols(), hid = hv.cols();
  if (hv.rows() != batch || wx.rows() != in || wx.cols() != 3 * hid || wh.rows() != hid ||
      wh.cols() != 3 * hid || w.input_bias.value().size() != 3 * hid ||
      w.state_bias.value().size() != 3 * hid) {
    throw Error("recurrent cell shape mismatch");
  }
  const std::size_t g3 = 3 * hid;
  // gx = x Wx + bx, gh = h Wh + bh
  std::vector<double> gx(batch * g3), gh(batch * g3);
  kernels::gemm_nn(batch, g3, in, xv.values(), wx.values(), gx, false);
  kernels::gemm_nn(batch, g3, hid, hv.values(), wh.values(), gh, false);
  const Tensor& bx = w.input_bias.value();
  const Tensor& bh = w.state_bias.value();
  std::vector<double> r(batch * hid), z(batch * hid), n(batch * hid);
  Tensor out = Tensor::matrix(batch, hid);
  for (std::size_t b = 0; b < batch; ++b) {
    double* gxb = gx.data() + b * g3;
    double* ghb = gh.data() + b * g3;
    for (std::size_t c = 0; c < g3; ++c) {
      gxb[c] += bx[c];
      ghb[c] += bh[c];
    }
    for (std::size_t c = 0; c < hid; ++c) {
      const std::size_t o = b * hid + c;
      r[o] = sigmoid_scalar(gxb[c] + ghb[c]);
      z[o] = sigmoid_scalar(gxb[hid + c] + ghb[hid + c]);
      n[o] = std::tanh(gxb[2 * hid + c] + r[o] * ghb[2 * hid + c]);
      out[o] = (1.0 - z[o]) * n[o] + z[o] * hv[o];
    }
  }

  const std::size_t ix = x.id(), ih = h.id(), iwx = w.input_weights.id(),
                    iwh = w.state_weights.id(), ibx = w.input_bias.id(), ibh = w.state_bias.id();
  return tape.push(
      OpKind::kRecurrentCell, std::move(out), {ix, ih, iwx, iwh, ibx, ibh},
      [=, gh = std::move(gh), r = std::move(r), z = std::move(z), n = std::move(n)](
          Tape& t, std::size_t self) {
        const Tensor& g = t.output_grad(self);
        const Tensor& hprev = t.value(ih);
        std::vector<double> dgx(batch * g3), dgh(batch * g3);
        std::vector<double> dh_direct(batch * hid);
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t c = 0; c < hid; ++c) {
            const std::size_t o = b * hid + c;
            const double go = g[o];
            const double dn = go * (1.0 - z[o]);
            const double dz = go * (hprev[o] - n[o]);
            dh_direct[o] = go * z[o];
            const double dan = dn * (1.0 - n[o] * n[o]);
            const double ghn = gh[b * g3 + 2 * hid + c];
            const double dr = dan * ghn;
            const double dar = dr * r[o] * (1.0 - r[o]);
            const double daz = dz * z[o] * (1.0 - z[o]);
            dgx[b * g3 + c] = dar;
            dgh[b * g3 + c] = dar;
            dgx[b * g3 + hid + c] = daz;
            dgh[b * g3 + hid + c] = daz;
            dgx[b * g3 + 2 * hid + c] = dan;
            dgh[b * g3 + 2 * hid + c] = dan * r[o];
          }
        }
        if (t.requires_grad(ix)) {
          kernels::gemm_nt(batch, in, g3, dgx, t.value(iwx).values(), t.grad_buffer(ix).values(),
                           true);
        }
        if (t.requires_grad(ih)) {
          Tensor& gh_in = t.grad_buffer(ih);
          kernels::gemm_nt(batch, hid, g3, dgh, t.value(iwh).values(), gh_in.values(), true);
          for (std::size_t o = 0; o < batch * hid; ++o) gh_in[o] += dh_direct[o];
        }
        if (t.requires_grad(iwx)) {
          kernels::gemm_tn(in, g3, batch, t.value(ix).values(), dgx, t.grad_buffer(iwx).values(),
                           true);
        }
        if (t.requires_grad(iwh)) {
          kernels::gemm_tn(hid, g3, batch, hprev.values(), dgh, t.grad_buffer(iwh).values(), true);
        }
        if (t.requires_grad(ibx)) {
          Tensor& gb = t.grad_buffer(ibx);
          for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t c = 0; c < g3; ++c) gb[c] += dgx[b * g3 + c];
          }
        }
        if (t.requires_grad(ibh)) {
          Tensor& gb = t.grad_buffer(ibh);
          for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t c = 0; c < g3; ++c) gb[c] += dgh[b * g3 + c];
          }
        }
      });
}

// ---- layer normalization ---------------------------------------------------

Var layer_norm(Var x, Var gain, Var bias, double eps) {
  Tape& tape = common_tape({x, gain, bias});
  const Tensor& xv = x.value();
  const std::size_t rows = xv.rows(), cols = xv.cols();
  if (gain.value().size() != cols || bias.value().size() != cols) {
    throw Error("layer norm gain/bias must have " + std::to_string(cols) + " entries");
  }
  const Tensor& gv = gain.value();
  const Tensor& bv = bias.value();
  std::vector<double> xhat(rows * cols), inv_std(rows);
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < rows; ++i) {
    const auto xr = xv.row(i);
    double mean = 0.0;
    for (const double e : xr) mean += e;
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (const double e : xr) var += (e - mean) * (e - mean);
    var /= static_cast<double>(cols);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < cols; ++j) {
      const double xh = (xr[j] - mean) * inv_std[i];
      xhat[i * cols + j] = xh;
      out[i * cols + j] = xh * gv[j] + bv[j];
    }
  }
  const std::size_t ix = x.id(), ig = gain.id(), ib = bias.id();
  return tape.push(
      OpKind::kLayerNorm, std::move(out), {ix, ig, ib},
      [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t, std::size_t self) {
        const Tensor& g = t.output_grad(self);
        const Tensor& gain_v = t.value(ig);
        if (t.requires_grad(ig)) {
          Tensor& gg = t.grad_buffer(ig);
          for (std::size_t i = 0; i < rows * cols; ++i) gg[i % cols] += g[i] * xhat[i];
        }
        if (t.requires_grad(ib)) {
          Tensor& gb = t.grad_buffer(ib);
          for (std::size_t i = 0; i < rows * cols; ++i) gb[i % cols] += g[i];
        }
        if (!t.requires_grad(ix)) return;
        Tensor& gx = t.grad_buffer(ix);
        const double nc = static_cast<double>(cols);
        for (std::size_t i = 0; i < rows; ++i) {
          double sum_d = 0.0, sum_dx = 0.0;
          for (std::size_t j = 0; j < cols; ++j) {
            const double dxh = g[i * cols + j] * gain_v[j];
            sum_d += dxh;
            sum_dx += dxh * xhat[i * cols + j];
          }
          for (std::size_t j = 0; j < cols; ++j) {
            const double dxh = g[i * cols + j] * gain_v[j];
            gx[i * cols + j] +=
                inv_std[i] / nc * (nc * dxh - sum_d - xhat[i * cols + j] * sum_dx);
          }
        }
      });
}

// ---- losses ----------------------------------------------------------------

Tensor softmax_rows(const Tensor& logits) {
  Tensor p(logits.shape());
  const std::size_t cols = logits.cols();
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto lr = logits.row(i);
    const double mx = *std::max_element(lr.begin(), lr.end());
    double z = 0.0;
    auto pr = p.row(i);
    for (std::size_t j = 0; j < cols; ++j) {
      pr[j] = std::exp(lr[j] - mx);
      z += pr[j];
    }
    for (std::size_t j = 0; j < cols; ++j) pr[j] /= z;
  }
  return p;
}

namespace {

// Returns (mean loss, number of scored rows); validates targets.
std::pair<double, std::size_t> xent_forward(const Tensor& logits, std::span<const int> targets) {
  if (targets.size() != logits.rows()) {
    throw Error("cross entropy: " + std::to_string(targets.size()) + " targets for " +
                std::to_string(logits.rows()) + " rows");
  }
  const std::size_t vocab = logits.cols();
  double total = 0.0;
  std::size_t scored = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const int tgt = targets[i];
    if (tgt < 0) continue;
    if (static_cast<std::size_t>(tgt) >= vocab) {
      throw Error("target id " + std::to_string(tgt) + " out of range for vocabulary of " +
                  std::to_string(vocab));
    }
    const auto lr = logits.row(i);
    const double mx = *std::max_element(lr.begin(), lr.end());
    double z = 0.0;
    for (const double e : lr) z += std::exp(e - mx);
    total += -(lr[static_cast<std::size_t>(tgt)] - mx - std::log(z));
    ++scored;
  }
  if (scored == 0) throw Error("empty target");
  return {total / static_cast<double>(scored), scored};
}

}  // namespace

Var softmax_cross_entropy(Var logits, std::span<const int> targets) {
  Tape& tape = tape_of(logits);
  const auto [loss, scored] = xent_forward(logits.value(), targets);
  const std::size_t il = logits.id();
  std::vector<int> tg(targets.begin(), targets.end());
  return tape.push(OpKind::kSoftmaxCrossEntropy, Tensor::scalar(loss), {il},
                   [il, tg = std::move(tg), scored](Tape& t, std::size_t self) {
                     if (!t.requires_grad(il)) return;
                     const double g = t.output_grad(self)[0] / static_cast<double>(scored);
                     const Tensor& lv = t.value(il);
                     Tensor& gl = t.grad_buffer(il);
                     const std::size_t cols = lv.cols();
                     for (std::size_t i = 0; i < tg.size(); ++i) {
                       if (tg[i] < 0) continue;
                       const auto lr = lv.row(i);
                       const double mx = *std::max_element(lr.begin(), lr.end());
                       double z = 0.0;
                       for (const double e : lr) z += std::exp(e - mx);
                       auto gr = gl.row(i);
                       for (std::size_t j = 0; j < cols; ++j) gr[j] += g * std::exp(lr[j] - mx) / z;
                       gr[static_cast<std::size_t>(tg[i])] -= g;
                     }
                   });
}

Var squared_error(Var pred, std::span<const double> target) {
  Tape& tape = tape_of(pred);
  const Tensor& pv = pred.value();
  const double loss = mse_loss(pv.values(), target);
  const std::size_t ip = pred.id();
  std::vector<double> tg(target.begin(), target.end());
  return tape.push(OpKind::kSquaredError, Tensor::scalar(loss), {ip},
                   [ip, tg = std::move(tg)](Tape& t, std::size_t self) {
                     if (!t.requires_grad(ip)) return;
                     const double g = t.output_grad(self)[0];
                     const Tensor& pv = t.value(ip);
                     Tensor& gp = t.grad_buffer(ip);
                     const double n = static_cast<double>(tg.size());
                     for (std::size_t i = 0; i < tg.size(); ++i) gp[i] += g * 2.0 * (pv[i] - tg[i]) / n;
                   });
}

double nll_loss(const Tensor& logits, std::span<const int> targets,
                const std::vector<bool>& pad_mask) {
  if (pad_mask.size() != targets.size()) throw Error("pad mask length differs from targets");
  std::vector<int> masked(targets.begin(), targets.end());
  for (std::size_t i = 0; i < masked.size(); ++i) {
    if (pad_mask[i]) {
      masked[i] = -1;
    } else if (masked[i] < 0) {
      throw Error("target id " + std::to_string(masked[i]) + " out of range");
    }
  }
  return xent_forward(logits, masked).first;
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.empty()) throw Error("mse of empty sequences");
  if (pred.size() != target.size()) {
    throw Error("mse length mismatch: " + std::to_string(pred.size()) + " vs " +
                std::to_string(target.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

}  // namespace revexp::nn
