#include "seqmd/tensorcore/tensor.h"

#include <algorithm>
#include <cmath>

#include "seqmd/error.h"

namespace seqmd {

std::size_t ShapeSize(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

std::string ShapeToString(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += " x ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(ShapeSize(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (ShapeSize(shape_) != data_.size()) {
    throw DimensionError("tensor shape " + ShapeToString(shape_) + " holds " +
                         std::to_string(ShapeSize(shape_)) + " values, got " +
                         std::to_string(data_.size()));
  }
}

Tensor Tensor::Matrix(std::size_t rows, std::size_t cols,
                      std::initializer_list<double> values) {
  return Tensor({rows, cols}, std::vector<double>(values));
}

Tensor Tensor::RowVector(std::span<const double> values) {
  return Tensor({1, values.size()},
                std::vector<double>(values.begin(), values.end()));
}

void Tensor::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void MatMulInto(const Tensor& a, const Tensor& b, Tensor& out, bool accumulate) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  if (!accumulate) out.Fill(0.0);
  const double* pa = a.raw();
  const double* pb = b.raw();
  double* po = out.raw();
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = po + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      if (av == 0.0) continue;
      const double* brow = pb + p * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += av * brow[j];
    }
  }
}

void MatMulTransposeAAccumulate(const Tensor& a, const Tensor& g, Tensor& out) {
  const std::size_t n = a.rows(), k = a.cols(), m = g.cols();
  const double* pa = a.raw();
  const double* pg = g.raw();
  double* po = out.raw();
  for (std::size_t i = 0; i < n; ++i) {
    const double* grow = pg + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      if (av == 0.0) continue;
      double* orow = po + p * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += av * grow[j];
    }
  }
}

void MatMulTransposeBAccumulate(const Tensor& g, const Tensor& b, Tensor& out) {
  const std::size_t n = g.rows(), m = g.cols(), k = b.rows();
  const double* pg = g.raw();
  const double* pb = b.raw();
  double* po = out.raw();
  for (std::size_t i = 0; i < n; ++i) {
    const double* grow = pg + i * m;
    double* orow = po + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double* brow = pb + p * m;
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += grow[j] * brow[j];
      orow[p] += acc;
    }
  }
}

}  // namespace seqmd
