#include "seqmd/tensorcore/tape.h"

#include <cmath>
#include <string>

#include "seqmd/error.h"

namespace seqmd {

const char* OpName(OpKind op) {
  switch (op) {
    case OpKind::kConstant: return "constant";
    case OpKind::kLeaf: return "leaf";
    case OpKind::kParam: return "param";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kAddRow: return "add_row";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kAddScalar: return "add_scalar";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kRelu: return "relu";
    case OpKind::kLog: return "log";
    case OpKind::kSoftplus: return "softplus";
    case OpKind::kClamp: return "clamp";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kSliceCols: return "slice_cols";
    case OpKind::kSoftmaxRows: return "softmax_rows";
    case OpKind::kMulColumn: return "mul_column";
    case OpKind::kCumProdCols: return "cumprod_cols";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kCustom: return "custom";
  }
  return "unknown";
}

const Tensor& Var::value() const {
  if (!tape_) throw Error("use of a detached Var");
  return tape_->Value(id_);
}

namespace {

void RequireFinite(OpKind op, const Tensor& value) {
  if (value.AllFinite()) return;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!std::isfinite(value[i])) {
      throw NonFiniteError(OpName(op), "element " + std::to_string(i) + " of " +
                                           ShapeToString(value.shape()) +
                                           " is " + std::to_string(value[i]));
    }
  }
}

}  // namespace

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::CheckOwned(const Var& v) const {
  if (v.tape() != this) throw Error("Var belongs to a different or no tape");
}

Var Tape::Constant(Tensor value) {
  RequireFinite(OpKind::kConstant, value);
  Node n;
  n.op = OpKind::kConstant;
  n.value = std::move(value);
  return Push(std::move(n));
}

Var Tape::Leaf(Tensor value) {
  RequireFinite(OpKind::kLeaf, value);
  Node n;
  n.op = OpKind::kLeaf;
  n.value = std::move(value);
  n.requires_grad = true;
  return Push(std::move(n));
}

Var Tape::Param(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) {
    return Var(this, it->second);
  }
  if (!p.value.AllFinite()) {
    throw NonFiniteError(OpName(OpKind::kParam), "parameter " + p.name);
  }
  Node n;
  n.op = OpKind::kParam;
  n.value = p.value;
  n.requires_grad = true;
  n.param = &p;
  Var v = Push(std::move(n));
  param_nodes_[&p] = v.id();
  return v;
}

Var Tape::Record(OpKind op, std::initializer_list<Var> inputs, Tensor value,
                 BackwardFn backward) {
  return Record(op, std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(value), std::move(backward));
}

Var Tape::Record(OpKind op, std::span<const Var> inputs, Tensor value,
                 BackwardFn backward) {
  RequireFinite(op, value);
  Node n;
  n.op = op;
  n.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    CheckOwned(in);
    n.inputs.push_back(in.id());
    n.requires_grad = n.requires_grad || nodes_[in.id()].requires_grad;
  }
  n.value = std::move(value);
  if (n.requires_grad) n.backward = std::move(backward);
  return Push(std::move(n));
}

Tensor& Tape::GradBuffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.size() != n.value.size()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

void Tape::Backward(const Var& loss) {
  if (loss.tape() != this) throw Error("backward on a loss detached from this tape");
  const Tensor& lv = Value(loss.id());
  if (lv.size() != 1) {
    throw DimensionError("backward requires a scalar loss, got shape " +
                         ShapeToString(lv.shape()));
  }
  for (Node& n : nodes_) n.grad = Tensor();
  GradBuffer(loss.id()).Fill(1.0);
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param) {
      double* dst = n.param->grad.raw();
      const double* src = n.grad.raw();
      for (std::size_t i = 0; i < n.grad.size(); ++i) dst[i] += src[i];
    }
  }
}

}  // namespace seqmd
