#include "support/oracles.h"

#include <cmath>

namespace seqmd::oracle {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vec Affine(const Vec& x, const Tensor& w, const Tensor& b) {
  const std::size_t in = w.rows(), out = w.cols();
  Vec y(out, 0.0);
  for (std::size_t j = 0; j < out; ++j) {
    double s = b[j];
    for (std::size_t i = 0; i < in; ++i) s += x[i] * w(i, j);
    y[j] = s;
  }
  return y;
}

Vec Relu(Vec v) {
  for (double& x : v) x = x > 0 ? x : 0.0;
  return v;
}

Vec Tanh(Vec v) {
  for (double& x : v) x = std::tanh(x);
  return v;
}

Vec GruStep(const Vec& x, const Vec& h, const Tensor& wz, const Tensor& uz, const Tensor& bz,
            const Tensor& wr, const Tensor& ur, const Tensor& br, const Tensor& wh,
            const Tensor& uh, const Tensor& bh) {
  const std::size_t d = h.size();
  Vec z(d), r(d), out(d);
  for (std::size_t j = 0; j < d; ++j) {
    double az = bz[j], ar = br[j];
    for (std::size_t i = 0; i < x.size(); ++i) {
      az += x[i] * wz(i, j);
      ar += x[i] * wr(i, j);
    }
    for (std::size_t i = 0; i < d; ++i) {
      az += h[i] * uz(i, j);
      ar += h[i] * ur(i, j);
    }
    z[j] = Sigmoid(az);
    r[j] = Sigmoid(ar);
  }
  for (std::size_t j = 0; j < d; ++j) {
    double ac = bh[j];
    for (std::size_t i = 0; i < x.size(); ++i) ac += x[i] * wh(i, j);
    for (std::size_t i = 0; i < d; ++i) ac += r[i] * h[i] * uh(i, j);
    out[j] = (1.0 - z[j]) * h[j] + z[j] * std::tanh(ac);
  }
  return out;
}

Vec DescendingProbs(const Vec& logits) {
  Vec p(logits.size());
  double acc = 1.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    acc *= Sigmoid(logits[i]);
    p[i] = acc;
  }
  return p;
}

double Bce(double p, int label) { return label ? -std::log(p) : -std::log(1.0 - p); }

}  // namespace seqmd::oracle
