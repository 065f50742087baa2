#ifndef SEQMD_TENSORCORE_LAYERS_H_
#define SEQMD_TENSORCORE_LAYERS_H_

#include <string>
#include <vector>

#include "seqmd/tensorcore/ops.h"
#include "seqmd/tensorcore/parameter.h"

namespace seqmd {

enum class Activation { kIdentity, kRelu, kTanh, kSigmoid };

const char* ActivationName(Activation a);
Activation ParseActivation(const std::string& name);
Var Activate(Activation a, const Var& x);

// Chain of affine layers. `widths` includes the input width, so widths
// {4, 3} is a single 4->3 layer. Hidden layers use `hidden`, the last
// layer uses `output`.
class MlpBlock {
 public:
  MlpBlock(ParameterStore& store, const std::string& prefix,
           std::vector<int> widths, Activation hidden = Activation::kRelu,
           Activation output = Activation::kIdentity);

  Var Forward(Tape& tape, const Var& x) const;

  int input_dim() const { return widths_.front(); }
  int output_dim() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  std::size_t layer_count() const { return weights_.size(); }
  Parameter& weight(std::size_t layer) const { return *weights_[layer]; }
  Parameter& bias(std::size_t layer) const { return *biases_[layer]; }

  // sum over layers of (w_in + 1) * w_out
  static std::size_t ParamCount(const std::vector<int>& widths);

 private:
  std::vector<int> widths_;
  Activation hidden_;
  Activation output_;
  std::vector<Parameter*> weights_;  // [w_in x w_out]
  std::vector<Parameter*> biases_;   // [1 x w_out]
};

// Standard update/reset-gate GRU cell:
//   z = sigmoid(x W_z + h U_z + b_z)
//   r = sigmoid(x W_r + h U_r + b_r)
//   c = tanh(x W_h + (r * h) U_h + b_h)
//   h' = (1 - z) * h + z * c
class GruCell {
 public:
  GruCell(ParameterStore& store, const std::string& prefix, int input_dim,
          int hidden_dim);

  Var Step(Tape& tape, const Var& x, const Var& h_prev) const;

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }

  static std::size_t ParamCount(int input_dim, int hidden_dim) {
    return 3 * static_cast<std::size_t>(input_dim * hidden_dim +
                                        hidden_dim * hidden_dim + hidden_dim);
  }

  struct Gate {
    Parameter* w;
    Parameter* u;
    Parameter* b;
  };
  const Gate& update_gate() const { return z_; }
  const Gate& reset_gate() const { return r_; }
  const Gate& candidate() const { return h_; }

 private:
  Var GatePreactivation(Tape& tape, const Gate& g, const Var& x, const Var& h) const;

  int input_dim_;
  int hidden_dim_;
  Gate z_, r_, h_;
};

// Stack of GRU layers run over a token sequence with a zero initial state.
// Layer 0 takes `input_dim`, later layers take `hidden_dim`.
class GruStack {
 public:
  GruStack(ParameterStore& store, const std::string& prefix, int input_dim,
           int hidden_dim, int layers);

  std::vector<Var> Run(Tape& tape, const std::vector<Var>& tokens) const;

  int input_dim() const { return input_dim_; }
  int output_dim() const { return hidden_dim_; }
  std::size_t layer_count() const { return cells_.size(); }
  const GruCell& cell(std::size_t i) const { return cells_[i]; }

 private:
  int input_dim_;
  int hidden_dim_;
  std::vector<GruCell> cells_;
};

// Linear map followed by a row softmax: mixture weights over `n_inputs`.
class SoftmaxGate {
 public:
  SoftmaxGate(ParameterStore& store, const std::string& prefix, int input_dim,
              int n_inputs);

  // [batch x n_inputs], each row non-negative and summing to 1.
  Var Weights(Tape& tape, const Var& x) const;
  // sum_e weights[:, e] * candidates[e]
  Var Mix(Tape& tape, const Var& x, const std::vector<Var>& candidates) const;

  int input_count() const { return linear_.output_dim(); }

 private:
  MlpBlock linear_;
};

}  // namespace seqmd

#endif  // SEQMD_TENSORCORE_LAYERS_H_
