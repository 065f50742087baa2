#ifndef SEQMD_TENSORCORE_TAPE_H_
#define SEQMD_TENSORCORE_TAPE_H_

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <unordered_map>
#include <vector>

#include "seqmd/tensorcore/parameter.h"
#include "seqmd/tensorcore/tensor.h"

namespace seqmd {

enum class OpKind {
  kConstant,
  kLeaf,
  kParam,
  kMatMul,
  kAddRow,
  kAdd,
  kSub,
  kMul,
  kScale,
  kAddScalar,
  kSigmoid,
  kTanh,
  kRelu,
  kLog,
  kSoftplus,
  kClamp,
  kConcatCols,
  kSliceCols,
  kSoftmaxRows,
  kMulColumn,
  kCumProdCols,
  kSum,
  kMean,
  kCustom,
};

const char* OpName(OpKind op);

class Tape;

// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Records ops in execution order (which is a topological order) and runs
// reverse-mode differentiation over them. Single-threaded.
class Tape {
 public:
  // Called once during Backward with the node's own id; reads Grad(self)
  // and accumulates into GradBuffer(input) for inputs that RequiresGrad.
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Tensor value);
  // A differentiable leaf whose gradient is read back with Grad().
  Var Leaf(Tensor value);
  // Repeated calls for the same parameter return the same node.
  Var Param(Parameter& p);

  // Appends an op node. Throws NonFiniteError if `value` has NaN/Inf.
  // `backward` is dropped when no input requires a gradient.
  Var Record(OpKind op, std::initializer_list<Var> inputs, Tensor value,
             BackwardFn backward);
  Var Record(OpKind op, std::span<const Var> inputs, Tensor value,
             BackwardFn backward);

  // Seeds d(loss)/d(loss) = 1 and propagates to every leaf. Parameter
  // gradients are accumulated into Parameter::grad.
  void Backward(const Var& loss);

  const Tensor& Value(std::size_t id) const { return nodes_[id].value; }
  // Gradient of a node after Backward; empty tensor if none was produced.
  const Tensor& Grad(std::size_t id) const { return nodes_[id].grad; }
  const Tensor& Grad(const Var& v) const { return Grad(v.id()); }
  Tensor& GradBuffer(std::size_t id);
  bool RequiresGrad(std::size_t id) const { return nodes_[id].requires_grad; }

  OpKind op(std::size_t id) const { return nodes_[id].op; }
  const std::vector<std::size_t>& inputs(std::size_t id) const {
    return nodes_[id].inputs;
  }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    OpKind op;
    std::vector<std::size_t> inputs;
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
    BackwardFn backward;
  };

  Var Push(Node node);
  void CheckOwned(const Var& v) const;

  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
};

}  // namespace seqmd

#endif  // SEQMD_TENSORCORE_TAPE_H_
