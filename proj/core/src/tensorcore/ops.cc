#include "seqmd/tensorcore/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqmd/error.h"

namespace seqmd {
namespace {

void RequireSameShape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         ShapeToString(a.shape()) + " vs " +
                         ShapeToString(b.shape()));
  }
}

void Accumulate(Tape& t, std::size_t id, const Tensor& g, double factor = 1.0) {
  if (!t.RequiresGrad(id)) return;
  Tensor& dst = t.GradBuffer(id);
  for (std::size_t i = 0; i < g.size(); ++i) dst[i] += factor * g[i];
}

// Elementwise unary op; `deriv(x, y)` is dy/dx given input x and output y.
template <typename F, typename D>
Var Unary(OpKind op, const Var& a, F f, D deriv) {
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = f(av[i]);
  const std::size_t in = a.id();
  return a.tape()->Record(op, {a}, std::move(out),
                          [in, deriv](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            const Tensor& x = t.Value(in);
                            const Tensor& y = t.Value(self);
                            Tensor& dx = t.GradBuffer(in);
                            for (std::size_t i = 0; i < g.size(); ++i) {
                              dx[i] += g[i] * deriv(x[i], y[i]);
                            }
                          });
}

}  // namespace

double StableSigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Var MatMul(const Var& a, const Var& b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows()) {
    throw DimensionError("matmul: " + ShapeToString(av.shape()) + " x " +
                         ShapeToString(bv.shape()));
  }
  Tensor out({av.rows(), bv.cols()});
  MatMulInto(av, bv, out, false);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->Record(OpKind::kMatMul, {a, b}, std::move(out),
                          [ia, ib](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            if (t.RequiresGrad(ia)) {
                              MatMulTransposeBAccumulate(g, t.Value(ib), t.GradBuffer(ia));
                            }
                            if (t.RequiresGrad(ib)) {
                              MatMulTransposeAAccumulate(t.Value(ia), g, t.GradBuffer(ib));
                            }
                          });
}

Var AddRow(const Var& a, const Var& bias) {
  const Tensor& av = a.value();
  const Tensor& bv = bias.value();
  if (bv.rows() != 1 || bv.cols() != av.cols()) {
    throw DimensionError("add_row: " + ShapeToString(av.shape()) + " + " +
                         ShapeToString(bv.shape()));
  }
  Tensor out = av;
  const std::size_t n = av.rows(), m = av.cols();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) out[r * m + c] += bv[c];
  const std::size_t ia = a.id(), ib = bias.id();
  return a.tape()->Record(OpKind::kAddRow, {a, bias}, std::move(out),
                          [ia, ib, n, m](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            Accumulate(t, ia, g);
                            if (t.RequiresGrad(ib)) {
                              Tensor& db = t.GradBuffer(ib);
                              for (std::size_t r = 0; r < n; ++r)
                                for (std::size_t c = 0; c < m; ++c) db[c] += g[r * m + c];
                            }
                          });
}

Var Add(const Var& a, const Var& b) {
  RequireSameShape("add", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->Record(OpKind::kAdd, {a, b}, std::move(out),
                          [ia, ib](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            Accumulate(t, ia, g);
                            Accumulate(t, ib, g);
                          });
}

Var Sub(const Var& a, const Var& b) {
  RequireSameShape("sub", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->Record(OpKind::kSub, {a, b}, std::move(out),
                          [ia, ib](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            Accumulate(t, ia, g);
                            Accumulate(t, ib, g, -1.0);
                          });
}

Var Mul(const Var& a, const Var& b) {
  RequireSameShape("mul", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->Record(OpKind::kMul, {a, b}, std::move(out),
                          [ia, ib](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            if (t.RequiresGrad(ia)) {
                              const Tensor& y = t.Value(ib);
                              Tensor& d = t.GradBuffer(ia);
                              for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * y[i];
                            }
                            if (t.RequiresGrad(ib)) {
                              const Tensor& x = t.Value(ia);
                              Tensor& d = t.GradBuffer(ib);
                              for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * x[i];
                            }
                          });
}

Var Scale(const Var& a, double factor) {
  return Unary(
      OpKind::kScale, a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Var AddScalar(const Var& a, double offset) {
  return Unary(
      OpKind::kAddScalar, a, [offset](double x) { return x + offset; },
      [](double, double) { return 1.0; });
}

Var OneMinus(const Var& a) {
  return Unary(
      OpKind::kAddScalar, a, [](double x) { return 1.0 - x; },
      [](double, double) { return -1.0; });
}

Var Sigmoid(const Var& a) {
  return Unary(OpKind::kSigmoid, a, StableSigmoid,
               [](double, double y) { return y * (1.0 - y); });
}

Var Tanh(const Var& a) {
  return Unary(
      OpKind::kTanh, a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var Relu(const Var& a) {
  return Unary(
      OpKind::kRelu, a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var Log(const Var& a) {
  return Unary(
      OpKind::kLog, a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Var Softplus(const Var& a) {
  return Unary(
      OpKind::kSoftplus, a,
      [](double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); },
      [](double x, double) { return StableSigmoid(x); });
}

Var Clamp(const Var& a, double lo, double hi) {
  return Unary(
      OpKind::kClamp, a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Var ConcatCols(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const std::size_t n = parts[0].rows();
  std::size_t total = 0;
  std::vector<std::size_t> ids, widths;
  for (const Var& p : parts) {
    if (p.rows() != n) {
      throw DimensionError("concat_cols: row mismatch " + std::to_string(p.rows()) +
                           " vs " + std::to_string(n));
    }
    ids.push_back(p.id());
    widths.push_back(p.cols());
    total += p.cols();
  }
  Tensor out({n, total});
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    const std::size_t w = v.cols();
    for (std::size_t r = 0; r < n; ++r)
      std::copy_n(v.raw() + r * w, w, out.raw() + r * total + offset);
    offset += w;
  }
  return parts[0].tape()->Record(
      OpKind::kConcatCols, parts, std::move(out),
      [ids, widths, n, total](Tape& t, std::size_t self) {
        const Tensor& g = t.Grad(self);
        std::size_t off = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          const std::size_t w = widths[k];
          if (t.RequiresGrad(ids[k])) {
            Tensor& d = t.GradBuffer(ids[k]);
            for (std::size_t r = 0; r < n; ++r)
              for (std::size_t c = 0; c < w; ++c) d[r * w + c] += g[r * total + off + c];
          }
          off += w;
        }
      });
}

Var SliceCols(const Var& a, std::size_t begin, std::size_t end) {
  const Tensor& av = a.value();
  if (begin > end || end > av.cols()) {
    throw DimensionError("slice_cols: [" + std::to_string(begin) + ", " +
                         std::to_string(end) + ") out of " + ShapeToString(av.shape()));
  }
  const std::size_t n = av.rows(), m = av.cols(), w = end - begin;
  Tensor out({n, w});
  for (std::size_t r = 0; r < n; ++r)
    std::copy_n(av.raw() + r * m + begin, w, out.raw() + r * w);
  const std::size_t ia = a.id();
  return a.tape()->Record(OpKind::kSliceCols, {a}, std::move(out),
                          [ia, n, m, w, begin](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            Tensor& d = t.GradBuffer(ia);
                            for (std::size_t r = 0; r < n; ++r)
                              for (std::size_t c = 0; c < w; ++c)
                                d[r * m + begin + c] += g[r * w + c];
                          });
}

Var SoftmaxRows(const Var& a) {
  const Tensor& av = a.value();
  const std::size_t n = av.rows(), m = av.cols();
  Tensor out({n, m});
  for (std::size_t r = 0; r < n; ++r) {
    const double* x = av.raw() + r * m;
    double* y = out.raw() + r * m;
    const double mx = *std::max_element(x, x + m);
    double z = 0.0;
    for (std::size_t c = 0; c < m; ++c) z += (y[c] = std::exp(x[c] - mx));
    for (std::size_t c = 0; c < m; ++c) y[c] /= z;
  }
  const std::size_t ia = a.id();
  return a.tape()->Record(OpKind::kSoftmaxRows, {a}, std::move(out),
                          [ia, n, m](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            const Tensor& y = t.Value(self);
                            Tensor& d = t.GradBuffer(ia);
                            for (std::size_t r = 0; r < n; ++r) {
                              double dot = 0.0;
                              for (std::size_t c = 0; c < m; ++c) dot += g[r * m + c] * y[r * m + c];
                              for (std::size_t c = 0; c < m; ++c)
                                d[r * m + c] += y[r * m + c] * (g[r * m + c] - dot);
                            }
                          });
}

Var MulColumn(const Var& column, const Var& a) {
  const Tensor& cv = column.value();
  const Tensor& av = a.value();
  if (cv.cols() != 1 || cv.rows() != av.rows()) {
    throw DimensionError("mul_column: " + ShapeToString(cv.shape()) + " * " +
                         ShapeToString(av.shape()));
  }
  const std::size_t n = av.rows(), m = av.cols();
  Tensor out = av;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) out[r * m + c] *= cv[r];
  const std::size_t ic = column.id(), ia = a.id();
  return a.tape()->Record(OpKind::kMulColumn, {column, a}, std::move(out),
                          [ic, ia, n, m](Tape& t, std::size_t self) {
                            const Tensor& g = t.Grad(self);
                            if (t.RequiresGrad(ic)) {
                              const Tensor& x = t.Value(ia);
                              Tensor& d = t.GradBuffer(ic);
                              for (std::size_t r = 0; r < n; ++r) {
                                double acc = 0.0;
                                for (std::size_t c = 0; c < m; ++c) acc += g[r * m + c] * x[r * m + c];
                                d[r] += acc;
                              }
                            }
                            if (t.RequiresGrad(ia)) {
                              const Tensor& cvv = t.Value(ic);
                              Tensor& d = t.GradBuffer(ia);
                              for (std::size_t r = 0; r < n; ++r)
                                for (std::size_t c = 0; c < m; ++c) d[r * m + c] += g[r * m + c] * cvv[r];
                            }
                          });
}

Var CumProdCols(const Var& a) {
  const Tensor& av = a.value();
  const std::size_t n = av.rows(), m = av.cols();
  Tensor out({n, m});
  for (std::size_t r = 0; r < n; ++r) {
    double run = 1.0;
    for (std::size_t c = 0; c < m; ++c) {
      run *= av[r * m + c];
      out[r * m + c] = run;
    }
  }
  const std::size_t ia = a.id();
  return a.tape()->Record(
      OpKind::kCumProdCols, {a}, std::move(out), [ia, n, m](Tape& t, std::size_t self) {
        const Tensor& g = t.Grad(self);
        const Tensor& x = t.Value(ia);
        Tensor& d = t.GradBuffer(ia);
        for (std::size_t r = 0; r < n; ++r) {
          const double* xr = x.raw() + r * m;
          const double* gr = g.raw() + r * m;
          double prefix = 1.0;  // prod_{l < i} x_l
          for (std::size_t i = 0; i < m; ++i) {
            // d out_j / d x_i = prefix * prod_{i < l <= j} x_l, for j >= i.
            double run = prefix;
            double acc = 0.0;
            for (std::size_t j = i; j < m; ++j) {
              if (j > i) run *= xr[j];
              acc += gr[j] * run;
            }
            d[r * m + i] += acc;
            prefix *= xr[i];
          }
        }
      });
}

Var Sum(const Var& a) {
  const Tensor& av = a.value();
  double s = 0.0;
  for (double v : av.data()) s += v;
  const std::size_t ia = a.id();
  return a.tape()->Record(OpKind::kSum, {a}, Tensor::Scalar(s),
                          [ia](Tape& t, std::size_t self) {
                            const double g = t.Grad(self)[0];
                            Tensor& d = t.GradBuffer(ia);
                            for (double& v : d.data()) v += g;
                          });
}

Var Mean(const Var& a) {
  const Tensor& av = a.value();
  if (av.size() == 0) throw DimensionError("mean of an empty tensor");
  double s = 0.0;
  for (double v : av.data()) s += v;
  const double inv = 1.0 / static_cast<double>(av.size());
  const std::size_t ia = a.id();
  return a.tape()->Record(OpKind::kMean, {a}, Tensor::Scalar(s * inv),
                          [ia, inv](Tape& t, std::size_t self) {
                            const double g = t.Grad(self)[0] * inv;
                            Tensor& d = t.GradBuffer(ia);
                            for (double& v : d.data()) v += g;
                          });
}

}  // namespace seqmd
