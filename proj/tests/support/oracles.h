#ifndef SEQMD_TESTS_SUPPORT_ORACLES_H_
#define SEQMD_TESTS_SUPPORT_ORACLES_H_

// Straight-line reference computations, written without the graph engine.

#include <cstddef>
#include <vector>

#include "seqmd/tensorcore/tensor.h"

namespace seqmd::oracle {

using Vec = std::vector<double>;

double Sigmoid(double x);
// x[1 x in] * w[in x out] + b
Vec Affine(const Vec& x, const Tensor& w, const Tensor& b);
Vec Relu(Vec v);
Vec Tanh(Vec v);

// One GRU step, scalar by scalar.
Vec GruStep(const Vec& x, const Vec& h, const Tensor& wz, const Tensor& uz, const Tensor& bz,
            const Tensor& wr, const Tensor& ur, const Tensor& br, const Tensor& wh,
            const Tensor& uh, const Tensor& bh);

// Cumulative sigmoid products of the logits.
Vec DescendingProbs(const Vec& logits);

double Bce(double p, int label);

}  // namespace seqmd::oracle

#endif  // SEQMD_TESTS_SUPPORT_ORACLES_H_
