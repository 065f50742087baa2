#ifndef SEQMD_TENSORCORE_OPS_H_
#define SEQMD_TENSORCORE_OPS_H_

#include <span>

#include "seqmd/tensorcore/tape.h"

namespace seqmd {

// All ops take rank-2 operands and throw DimensionError on mismatch.

Var MatMul(const Var& a, const Var& b);
// a[n x m] + bias[1 x m], bias broadcast over rows.
Var AddRow(const Var& a, const Var& bias);
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Scale(const Var& a, double factor);
Var AddScalar(const Var& a, double offset);
// 1 - a
Var OneMinus(const Var& a);

Var Sigmoid(const Var& a);
Var Tanh(const Var& a);
Var Relu(const Var& a);
Var Log(const Var& a);
// log(1 + exp(a)), numerically stable.
Var Softplus(const Var& a);
// Gradient passes only where lo <= a <= hi.
Var Clamp(const Var& a, double lo, double hi);

Var ConcatCols(std::span<const Var> parts);
Var SliceCols(const Var& a, std::size_t begin, std::size_t end);
Var SoftmaxRows(const Var& a);
// column[n x 1] broadcast-multiplied into a[n x m].
Var MulColumn(const Var& column, const Var& a);
// out[:, j] = prod_{i <= j} a[:, i]
Var CumProdCols(const Var& a);

Var Sum(const Var& a);
Var Mean(const Var& a);

double StableSigmoid(double x);

}  // namespace seqmd

#endif  // SEQMD_TENSORCORE_OPS_H_
