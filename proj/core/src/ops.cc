// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/ops.h"

#include <cmath>
#include <limits>
#include <string>

namespace fsca::ops {
namespace {

void Require(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Row-wise stabilized softmax in place; -inf entries map to exactly 0.
void SoftmaxInPlace(Matrix* m) {
  for (Index r = 0; r < m->rows(); ++r) {
    double peak = -std::numeric_limits<double>::infinity();
    for (Index c = 0; c < m->cols(); ++c) peak = std::max(peak, (*m)(r, c));
    double total = 0.0;
    for (Index c = 0; c < m->cols(); ++c) {
      double e = std::exp((*m)(r, c) - peak);
      (*m)(r, c) = e;
      total += e;
    }
    for (Index c = 0; c < m->cols(); ++c) (*m)(r, c) /= total;
  }
}

// dS = A .* (dA - rowsum(dA .* A))
Matrix SoftmaxBackward(const Matrix& a, const Matrix& da) {
  Matrix ds(a.rows(), a.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    double inner = 0.0;
    for (Index c = 0; c < a.cols(); ++c) inner += da(r, c) * a(r, c);
    for (Index c = 0; c < a.cols(); ++c) ds(r, c) = a(r, c) * (da(r, c) - inner);
  }
  return ds;
}

}  // namespace

Var Linear(Tape& t, Var x, Var weight, Var bias) {
  const Matrix& in = t.Value(x);
  const Matrix& w = t.Value(weight);
  const Matrix& b = t.Value(bias);
  Require(in.cols() == w.rows(), "Linear: input " + ShapeString(in) +
                                     " incompatible with weight " +
                                     ShapeString(w));
  ExpectShape(b, 1, w.cols(), "Linear bias");
  Matrix y = in * w;
  y.rowwise() += b.row(0);
  return t.Record(std::move(y), {x, weight, bias},
                  [x, weight, bias](Tape& t, const Matrix& dy) {
                    if (t.RequiresGrad(weight))
                      t.Grad(weight).noalias() += t.Value(x).transpose() * dy;
                    if (t.RequiresGrad(bias))
                      t.Grad(bias).noalias() += dy.colwise().sum();
                    if (t.RequiresGrad(x))
                      t.Grad(x).noalias() += dy * t.Value(weight).transpose();
                  });
}

Var PointwiseConv(Tape& t, Var x, Var weight, Var bias) {
  const Matrix& in = t.Value(x);
  const Matrix& w = t.Value(weight);
  const Matrix& b = t.Value(bias);
  Require(in.rows() == w.rows(), "PointwiseConv: input " + ShapeString(in) +
                                     " incompatible with weight " +
                                     ShapeString(w));
  ExpectShape(b, 1, w.cols(), "PointwiseConv bias");
  Matrix y = w.transpose() * in;
  y.colwise() += b.row(0).transpose();
  return t.Record(std::move(y), {x, weight, bias},
                  [x, weight, bias](Tape& t, const Matrix& dy) {
                    if (t.RequiresGrad(weight))
                      t.Grad(weight).noalias() += t.Value(x) * dy.transpose();
                    if (t.RequiresGrad(bias))
                      t.Grad(bias).noalias() += dy.rowwise().sum().transpose();
                    if (t.RequiresGrad(x))
                      t.Grad(x).noalias() += t.Value(weight) * dy;
                  });
}

Var DepthwiseConv(Tape& t, Var x, Var kernel, int dilation) {
  const Matrix& in = t.Value(x);
  const Matrix& k = t.Value(kernel);
  if (dilation < 1) throw ShapeError("DepthwiseConv: dilation must be >= 1");
  if (k.cols() < 1) throw ShapeError("DepthwiseConv: kernel size must be >= 1");
  Require(k.rows() == in.rows(), "DepthwiseConv: kernel " + ShapeString(k) +
                                     " does not match input " +
                                     ShapeString(in));
  const Index channels = in.rows(), frames = in.cols(), taps = k.cols();
  Matrix y(channels, frames);
  for (Index c = 0; c < channels; ++c) {
    for (Index f = 0; f < frames; ++f) {
      double acc = 0.0;
      for (Index j = 0; j < taps; ++j) {
        Index src = f - (taps - 1 - j) * dilation;
        if (src >= 0) acc += k(c, j) * in(c, src);
      }
      y(c, f) = acc;
    }
  }
  return t.Record(
      std::move(y), {x, kernel}, [x, kernel, dilation](Tape& t, const Matrix& dy) {
        const Matrix& in = t.Value(x);
        const Matrix& k = t.Value(kernel);
        const Index channels = in.rows(), frames = in.cols(), taps = k.cols();
        if (t.RequiresGrad(kernel)) {
          Matrix& dk = t.Grad(kernel);
          for (Index c = 0; c < channels; ++c)
            for (Index j = 0; j < taps; ++j) {
              const Index shift = (taps - 1 - j) * dilation;
              double acc = 0.0;
              for (Index f = shift; f < frames; ++f)
                acc += dy(c, f) * in(c, f - shift);
              dk(c, j) += acc;
            }
        }
        if (t.RequiresGrad(x)) {
          Matrix& dx = t.Grad(x);
          for (Index c = 0; c < channels; ++c)
            for (Index j = 0; j < taps; ++j) {
              const Index shift = (taps - 1 - j) * dilation;
              for (Index f = shift; f < frames; ++f)
                dx(c, f - shift) += k(c, j) * dy(c, f);
            }
        }
      });
}

Var PRelu(Tape& t, Var x, Var alpha) {
  const Matrix& in = t.Value(x);
  const Matrix& a = t.Value(alpha);
  ExpectShape(a, 1, in.rows(), "PRelu alpha");
  Matrix y(in.rows(), in.cols());
  for (Index c = 0; c < in.rows(); ++c)
    for (Index f = 0; f < in.cols(); ++f) {
      double v = in(c, f);
      y(c, f) = v >= 0.0 ? v : a(0, c) * v;
    }
  return t.Record(std::move(y), {x, alpha}, [x, alpha](Tape& t, const Matrix& dy) {
    const Matrix& in = t.Value(x);
    const Matrix& a = t.Value(alpha);
    const bool need_x = t.RequiresGrad(x), need_a = t.RequiresGrad(alpha);
    for (Index c = 0; c < in.rows(); ++c) {
      double da = 0.0;
      for (Index f = 0; f < in.cols(); ++f) {
        double v = in(c, f);
        if (v >= 0.0) {
          if (need_x) t.Grad(x)(c, f) += dy(c, f);
        } else {
          if (need_x) t.Grad(x)(c, f) += a(0, c) * dy(c, f);
          da += dy(c, f) * v;
        }
      }
      if (need_a) t.Grad(alpha)(0, c) += da;
    }
  });
}

Var Relu(Tape& t, Var x) {
  Matrix y = t.Value(x).cwiseMax(0.0);
  return t.Record(std::move(y), {x}, [x](Tape& t, const Matrix& dy) {
    const Matrix& in = t.Value(x);
    Matrix& dx = t.Grad(x);
    for (Index r = 0; r < in.rows(); ++r)
      for (Index c = 0; c < in.cols(); ++c)
        if (in(r, c) > 0.0) dx(r, c) += dy(r, c);
  });
}

Var GlobalLayerNorm(Tape& t, Var x, Var gamma, Var beta,
                    const NormStats* frozen, NormStats* stats_out) {
  const Matrix& in = t.Value(x);
  const Matrix& g = t.Value(gamma);
  const Matrix& b = t.Value(beta);
  ExpectShape(g, 1, in.rows(), "GlobalLayerNorm gamma");
  ExpectShape(b, 1, in.rows(), "GlobalLayerNorm beta");
  NormStats stats;
  if (frozen != nullptr) {
    stats = *frozen;
  } else {
    const double count = static_cast<double>(in.size());
    double sum = 0.0;
    for (Index i = 0; i < in.size(); ++i) sum += in.data()[i];
    stats.mean = sum / count;
    double sq = 0.0;
    for (Index i = 0; i < in.size(); ++i) {
      double d = in.data()[i] - stats.mean;
      sq += d * d;
    }
    stats.var = sq / count;
  }
  if (stats_out != nullptr) *stats_out = stats;
  const double inv_std = 1.0 / std::sqrt(stats.var + kGlobalNormEpsilon);
  Matrix normalized = (in.array() - stats.mean) * inv_std;
  Matrix y(in.rows(), in.cols());
  for (Index c = 0; c < in.rows(); ++c)
    y.row(c) = normalized.row(c) * g(0, c) + Matrix::Constant(1, in.cols(), b(0, c));
  const bool is_frozen = frozen != nullptr;
  return t.Record(
      std::move(y), {x, gamma, beta},
      [x, gamma, beta, inv_std, is_frozen, normalized = std::move(normalized)](
          Tape& t, const Matrix& dy) {
        const Matrix& g = t.Value(gamma);
        if (t.RequiresGrad(gamma)) {
          Matrix& dg = t.Grad(gamma);
          for (Index c = 0; c < dy.rows(); ++c)
            dg(0, c) += dy.row(c).dot(normalized.row(c));
        }
        if (t.RequiresGrad(beta))
          t.Grad(beta).noalias() += dy.rowwise().sum().transpose();
        if (!t.RequiresGrad(x)) return;
        Matrix dnorm(dy.rows(), dy.cols());
        for (Index c = 0; c < dy.rows(); ++c) dnorm.row(c) = dy.row(c) * g(0, c);
        Matrix& dx = t.Grad(x);
        if (is_frozen) {
          dx += dnorm * inv_std;
          return;
        }
        const double count = static_cast<double>(dy.size());
        double mean_d = 0.0, mean_dn = 0.0;
        for (Index i = 0; i < dnorm.size(); ++i) {
          mean_d += dnorm.data()[i];
          mean_dn += dnorm.data()[i] * normalized.data()[i];
        }
        mean_d /= count;
        mean_dn /= count;
        dx.array() +=
            (dnorm.array() - mean_d - normalized.array() * mean_dn) * inv_std;
      });
}

Var SoftmaxRows(Tape& t, Var x) {
  Matrix y = t.Value(x);
  SoftmaxInPlace(&y);
  // The output node's own value is needed in backward; capture a copy since
  // the closure cannot reach its own node.
  Matrix cached = y;
  return t.Record(std::move(y), {x},
                  [x, cached = std::move(cached)](Tape& t, const Matrix& dy) {
                    t.Grad(x) += SoftmaxBackward(cached, dy);
                  });
}

Var MultiHeadAttention(Tape& t, Var q, Var k, Var v, int heads, Var out_weight,
                       Var out_bias, AttentionMask mask,
                       std::vector<Matrix>* weights_out) {
  const Matrix& qm = t.Value(q);
  const Matrix& km = t.Value(k);
  const Matrix& vm = t.Value(v);
  const Matrix& wo = t.Value(out_weight);
  const Matrix& bo = t.Value(out_bias);
  if (heads < 1) throw ShapeError("MultiHeadAttention: heads must be >= 1");
  const Index d = qm.cols();
  if (d % heads != 0) {
    throw ShapeError("MultiHeadAttention: width " + std::to_string(d) +
                     " not divisible by " + std::to_string(heads) + " heads");
  }
  Require(km.cols() == d && vm.cols() == d,
          "MultiHeadAttention: q/k/v widths differ");
  Require(km.rows() == vm.rows(), "MultiHeadAttention: k/v lengths differ");
  Require(mask == AttentionMask::kFull || qm.rows() == km.rows(),
          "MultiHeadAttention: causal mask needs equal query/key lengths");
  Require(wo.rows() == d, "MultiHeadAttention: output weight " +
                              ShapeString(wo) + " does not take width " +
                              std::to_string(d));
  ExpectShape(bo, 1, wo.cols(), "MultiHeadAttention output bias");

  const Index tq = qm.rows(), tk = km.rows(), dk = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  std::vector<Matrix> weights(heads);
  Matrix concat(tq, d);
  for (int h = 0; h < heads; ++h) {
    Matrix scores = qm.middleCols(h * dk, dk) * km.middleCols(h * dk, dk).transpose();
    scores *= scale;
    if (mask == AttentionMask::kCausal) {
      for (Index i = 0; i < tq; ++i)
        for (Index j = i + 1; j < tk; ++j)
          scores(i, j) = -std::numeric_limits<double>::infinity();
    }
    SoftmaxInPlace(&scores);
    concat.middleCols(h * dk, dk).noalias() = scores * vm.middleCols(h * dk, dk);
    weights[h] = std::move(scores);
  }
  Matrix y = concat * wo;
  y.rowwise() += bo.row(0);
  if (weights_out != nullptr) *weights_out = weights;

  return t.Record(
      std::move(y), {q, k, v, out_weight, out_bias},
      [q, k, v, out_weight, out_bias, heads, dk, scale,
       weights = std::move(weights),
       concat = std::move(concat)](Tape& t, const Matrix& dy) {
        if (t.RequiresGrad(out_weight))
          t.Grad(out_weight).noalias() += concat.transpose() * dy;
        if (t.RequiresGrad(out_bias))
          t.Grad(out_bias).noalias() += dy.colwise().sum();
        const bool need_q = t.RequiresGrad(q), need_k = t.RequiresGrad(k),
                   need_v = t.RequiresGrad(v);
        if (!need_q && !need_k && !need_v) return;
        const Matrix& qm = t.Value(q);
        const Matrix& km = t.Value(k);
        const Matrix& vm = t.Value(v);
        Matrix dconcat = dy * t.Value(out_weight).transpose();
        for (int h = 0; h < heads; ++h) {
          const Matrix& a = weights[h];
          auto dout = dconcat.middleCols(h * dk, dk);
          if (need_v)
            t.Grad(v).middleCols(h * dk, dk).noalias() += a.transpose() * dout;
          Matrix da = dout * vm.middleCols(h * dk, dk).transpose();
          Matrix ds = SoftmaxBackward(a, da) * scale;
          if (need_q)
            t.Grad(q).middleCols(h * dk, dk).noalias() +=
                ds * km.middleCols(h * dk, dk);
          if (need_k)
            t.Grad(k).middleCols(h * dk, dk).noalias() +=
                ds.transpose() * qm.middleCols(h * dk, dk);
        }
      });
}

Var LstmLayer(Tape& t, Var x, Var input_weight, Var recurrent_weight,
              Var bias, const Matrix* h0, const Matrix* c0) {
  const Matrix& in = t.Value(x);
  const Matrix& wih = t.Value(input_weight);
  const Matrix& whh = t.Value(recurrent_weight);
  const Matrix& b = t.Value(bias);
  const Index hidden = whh.rows();
  Require(in.cols() == wih.rows(), "LstmLayer: input " + ShapeString(in) +
                                       " incompatible with input weight " +
                                       ShapeString(wih));
  ExpectShape(wih, in.cols(), 4 * hidden, "LstmLayer input weight");
  ExpectShape(whh, hidden, 4 * hidden, "LstmLayer recurrent weight");
  ExpectShape(b, 1, 4 * hidden, "LstmLayer bias");
  if (h0 != nullptr) ExpectShape(*h0, 1, hidden, "LstmLayer h0");
  if (c0 != nullptr) ExpectShape(*c0, 1, hidden, "LstmLayer c0");

  const Index frames = in.rows();
  Matrix h_init = h0 != nullptr ? *h0 : Matrix::Zero(1, hidden);
  Matrix c_init = c0 != nullptr ? *c0 : Matrix::Zero(1, hidden);

  Matrix pre = in * wih;
  pre.rowwise() += b.row(0);
  Matrix gates(frames, 4 * hidden);  // activated i, f, g, o
  Matrix cell(frames, hidden), cell_tanh(frames, hidden), out(frames, hidden);
  Matrix a(1, 4 * hidden);
  for (Index f = 0; f < frames; ++f) {
    if (f == 0) {
      a.noalias() = h_init * whh;
    } else {
      a.noalias() = out.row(f - 1) * whh;
    }
    a += pre.row(f);
    for (Index j = 0; j < hidden; ++j) {
      double ig = Sigmoid(a(0, j));
      double fg = Sigmoid(a(0, hidden + j));
      double gg = std::tanh(a(0, 2 * hidden + j));
      double og = Sigmoid(a(0, 3 * hidden + j));
      double c_prev = f == 0 ? c_init(0, j) : cell(f - 1, j);
      double c = fg * c_prev + ig * gg;
      double tc = std::tanh(c);
      gates(f, j) = ig;
      gates(f, hidden + j) = fg;
      gates(f, 2 * hidden + j) = gg;
      gates(f, 3 * hidden + j) = og;
      cell(f, j) = c;
      cell_tanh(f, j) = tc;
      out(f, j) = og * tc;
    }
  }
  Matrix y = out;
  return t.Record(
      std::move(y), {x, input_weight, recurrent_weight, bias},
      [x, input_weight, recurrent_weight, bias, hidden,
       h_init = std::move(h_init), c_init = std::move(c_init),
       gates = std::move(gates), cell = std::move(cell),
       cell_tanh = std::move(cell_tanh),
       out = std::move(out)](Tape& t, const Matrix& dy) {
        const Matrix& whh = t.Value(recurrent_weight);
        const Index frames = dy.rows();
        Matrix dpre(frames, 4 * hidden);
        Matrix dh_next = Matrix::Zero(1, hidden);
        Matrix dc_next = Matrix::Zero(1, hidden);
        for (Index f = frames - 1; f >= 0; --f) {
          for (Index j = 0; j < hidden; ++j) {
            double ig = gates(f, j), fg = gates(f, hidden + j),
                   gg = gates(f, 2 * hidden + j), og = gates(f, 3 * hidden + j);
            double tc = cell_tanh(f, j);
            double c_prev = f == 0 ? c_init(0, j) : cell(f - 1, j);
            double dh = dy(f, j) + dh_next(0, j);
            double d_o = dh * tc;
            double dc = dh * og * (1.0 - tc * tc) + dc_next(0, j);
            double di = dc * gg;
            double df = dc * c_prev;
            double dg = dc * ig;
            dc_next(0, j) = dc * fg;
            dpre(f, j) = di * ig * (1.0 - ig);
            dpre(f, hidden + j) = df * fg * (1.0 - fg);
            dpre(f, 2 * hidden + j) = dg * (1.0 - gg * gg);
            dpre(f, 3 * hidden + j) = d_o * og * (1.0 - og);
          }
          dh_next.noalias() = dpre.row(f) * whh.transpose();
        }
        if (t.RequiresGrad(recurrent_weight)) {
          Matrix prev(frames, hidden);
          prev.row(0) = h_init;
          if (frames > 1) prev.bottomRows(frames - 1) = out.topRows(frames - 1);
          t.Grad(recurrent_weight).noalias() += prev.transpose() * dpre;
        }
        if (t.RequiresGrad(input_weight))
          t.Grad(input_weight).noalias() += t.Value(x).transpose() * dpre;
        if (t.RequiresGrad(bias)) t.Grad(bias).noalias() += dpre.colwise().sum();
        if (t.RequiresGrad(x))
          t.Grad(x).noalias() += dpre * t.Value(input_weight).transpose();
      });
}

Var Add(Tape& t, Var a, Var b) {
  const Matrix& am = t.Value(a);
  const Matrix& bm = t.Value(b);
  Require(am.rows() == bm.rows() && am.cols() == bm.cols(),
          "Add: " + ShapeString(am) + " vs " + ShapeString(bm));
  return t.Record(am + bm, {a, b}, [a, b](Tape& t, const Matrix& dy) {
    Accumulate(t, a, dy);
    Accumulate(t, b, dy);
  });
}

Var Transpose(Tape& t, Var x) {
  Matrix y = t.Value(x).transpose();
  return t.Record(std::move(y), {x}, [x](Tape& t, const Matrix& dy) {
    t.Grad(x).noalias() += dy.transpose();
  });
}

Var ConcatCols(Tape& t, Var a, Var b) {
  const Matrix& am = t.Value(a);
  const Matrix& bm = t.Value(b);
  Require(am.rows() == bm.rows(),
          "ConcatCols: " + ShapeString(am) + " vs " + ShapeString(bm));
  Matrix y(am.rows(), am.cols() + bm.cols());
  y.leftCols(am.cols()) = am;
  y.rightCols(bm.cols()) = bm;
  const Index split = am.cols(), tail = bm.cols();
  return t.Record(std::move(y), {a, b},
                  [a, b, split, tail](Tape& t, const Matrix& dy) {
                    Accumulate(t, a, dy.leftCols(split));
                    Accumulate(t, b, dy.rightCols(tail));
                  });
}

Var MseLoss(Tape& t, Var pred, Var target) {
  const Matrix& p = t.Value(pred);
  const Matrix& g = t.Value(target);
  Require(p.rows() == g.rows() && p.cols() == g.cols(),
          "MseLoss: " + ShapeString(p) + " vs " + ShapeString(g));
  const double count = static_cast<double>(p.size());
  double sum = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    double d = p.data()[i] - g.data()[i];
    sum += d * d;
  }
  Matrix y(1, 1);
  y(0, 0) = sum / count;
  return t.Record(std::move(y), {pred, target},
                  [pred, target, count](Tape& t, const Matrix& dy) {
                    Matrix diff = (t.Value(pred) - t.Value(target)) *
                                  (2.0 * dy(0, 0) / count);
                    Accumulate(t, pred, diff);
                    if (t.RequiresGrad(target)) t.Grad(target) -= diff;
                  });
}

Var Dot(Tape& t, Var x, const Matrix& weights) {
  const Matrix& in = t.Value(x);
  ExpectShape(weights, in.rows(), in.cols(), "Dot weights");
  double sum = 0.0;
  for (Index i = 0; i < in.size(); ++i) sum += in.data()[i] * weights.data()[i];
  Matrix y(1, 1);
  y(0, 0) = sum;
  return t.Record(std::move(y), {x}, [x, weights](Tape& t, const Matrix& dy) {
    t.Grad(x).noalias() += weights * dy(0, 0);
  });
}

}  // namespace fsca::ops
