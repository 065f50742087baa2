#ifndef SEQMD_TENSORCORE_TENSOR_H_
#define SEQMD_TENSORCORE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace seqmd {

using Shape = std::vector<std::size_t>;

std::size_t ShapeSize(const Shape& shape);
std::string ShapeToString(const Shape& shape);

// Dense row-major f64 array. Graph values are always rank 2
// (rows = batch, cols = features); other ranks are allowed for storage.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Matrix(std::size_t rows, std::size_t cols,
                       std::initializer_list<double> values);
  static Tensor RowVector(std::span<const double> values);
  static Tensor Scalar(double value) { return Tensor({1, 1}, {value}); }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::size_t rank() const { return shape_.size(); }
  std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  std::size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double* raw() { return data_.data(); }
  const double* raw() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols() + c];
  }

  std::span<const double> Row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols(), cols());
  }

  void Fill(double value);
  bool AllFinite() const;

  bool operator==(const Tensor& other) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

// Dense kernels shared by the graph ops and tests.
// out[n x m] (+)= a[n x k] * b[k x m]
void MatMulInto(const Tensor& a, const Tensor& b, Tensor& out, bool accumulate);
// out[k x m] += a^T[k x n] * g[n x m]
void MatMulTransposeAAccumulate(const Tensor& a, const Tensor& g, Tensor& out);
// out[n x k] += g[n x m] * b^T[m x k]
void MatMulTransposeBAccumulate(const Tensor& g, const Tensor& b, Tensor& out);

}  // namespace seqmd

#endif  // SEQMD_TENSORCORE_TENSOR_H_
