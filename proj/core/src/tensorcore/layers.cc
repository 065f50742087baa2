#include "seqmd/tensorcore/layers.h"

#include "seqmd/error.h"

namespace seqmd {

const char* ActivationName(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "identity";
}

Activation ParseActivation(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ConfigError("unknown activation: " + name);
}

Var Activate(Activation a, const Var& x) {
  switch (a) {
    case Activation::kIdentity: return x;
    case Activation::kRelu: return Relu(x);
    case Activation::kTanh: return Tanh(x);
    case Activation::kSigmoid: return Sigmoid(x);
  }
  return x;
}

MlpBlock::MlpBlock(ParameterStore& store, const std::string& prefix,
                   std::vector<int> widths, Activation hidden, Activation output)
    : widths_(std::move(widths)), hidden_(hidden), output_(output) {
  if (widths_.size() < 2) {
    throw ConfigError(prefix + ": an MLP needs at least input and output widths");
  }
  for (int w : widths_) {
    if (w <= 0) throw ConfigError(prefix + ": MLP widths must be positive");
  }
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    const std::string base = prefix + ".l" + std::to_string(l);
    const auto in = static_cast<std::size_t>(widths_[l]);
    const auto out = static_cast<std::size_t>(widths_[l + 1]);
    weights_.push_back(&store.Create(base + ".weight", {in, out}, InitKind::kFanInUniform));
    biases_.push_back(&store.Create(base + ".bias", {1, out}, InitKind::kZero));
  }
}

Var MlpBlock::Forward(Tape& tape, const Var& x) const {
  if (x.cols() != static_cast<std::size_t>(widths_.front())) {
    throw DimensionError("mlp expects input width " + std::to_string(widths_.front()) +
                         ", got " + std::to_string(x.cols()));
  }
  Var h = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    h = AddRow(MatMul(h, tape.Param(*weights_[l])), tape.Param(*biases_[l]));
    h = Activate(l + 1 == weights_.size() ? output_ : hidden_, h);
  }
  return h;
}

std::size_t MlpBlock::ParamCount(const std::vector<int>& widths) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    n += static_cast<std::size_t>(widths[l] + 1) * static_cast<std::size_t>(widths[l + 1]);
  }
  return n;
}

GruCell::GruCell(ParameterStore& store, const std::string& prefix, int input_dim,
                 int hidden_dim)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
  if (input_dim <= 0 || hidden_dim <= 0) {
    throw ConfigError(prefix + ": GRU dimensions must be positive");
  }
  const auto in = static_cast<std::size_t>(input_dim);
  const auto hd = static_cast<std::size_t>(hidden_dim);
  auto make = [&](const char* tag) {
    const std::string t(tag);
    return Gate{&store.Create(prefix + ".W_" + t, {in, hd}, InitKind::kFanInUniform),
                &store.Create(prefix + ".U_" + t, {hd, hd}, InitKind::kFanInUniform),
                &store.Create(prefix + ".b_" + t, {1, hd}, InitKind::kZero)};
  };
  z_ = make("z");
  r_ = make("r");
  h_ = make("h");
}

Var GruCell::GatePreactivation(Tape& tape, const Gate& g, const Var& x,
                               const Var& h) const {
  return AddRow(Add(MatMul(x, tape.Param(*g.w)), MatMul(h, tape.Param(*g.u))),
                tape.Param(*g.b));
}

Var GruCell::Step(Tape& tape, const Var& x, const Var& h_prev) const {
  if (x.cols() != static_cast<std::size_t>(input_dim_) ||
      h_prev.cols() != static_cast<std::size_t>(hidden_dim_) ||
      x.rows() != h_prev.rows()) {
    throw DimensionError("gru step: x " + ShapeToString(x.value().shape()) + ", h " +
                         ShapeToString(h_prev.value().shape()) + " for cell " +
                         std::to_string(input_dim_) + "->" + std::to_string(hidden_dim_));
  }
  Var z = Sigmoid(GatePreactivation(tape, z_, x, h_prev));
  Var r = Sigmoid(GatePreactivation(tape, r_, x, h_prev));
  Var c = Tanh(GatePreactivation(tape, h_, x, Mul(r, h_prev)));
  return Add(Mul(OneMinus(z), h_prev), Mul(z, c));
}

GruStack::GruStack(ParameterStore& store, const std::string& prefix, int input_dim,
                   int hidden_dim, int layers)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
  if (layers < 1) throw ConfigError(prefix + ": GRU stack needs at least one layer");
  for (int l = 0; l < layers; ++l) {
    cells_.emplace_back(store, prefix + "." + std::to_string(l),
                        l == 0 ? input_dim : hidden_dim, hidden_dim);
  }
}

std::vector<Var> GruStack::Run(Tape& tape, const std::vector<Var>& tokens) const {
  std::vector<Var> seq = tokens;
  for (const GruCell& cell : cells_) {
    std::vector<Var> next;
    next.reserve(seq.size());
    Var h;
    for (const Var& x : seq) {
      if (!h.valid()) h = tape.Constant(Tensor({x.rows(), static_cast<std::size_t>(hidden_dim_)}));
      h = cell.Step(tape, x, h);
      next.push_back(h);
    }
    seq = std::move(next);
  }
  return seq;
}

SoftmaxGate::SoftmaxGate(ParameterStore& store, const std::string& prefix,
                         int input_dim, int n_inputs)
    : linear_(store, prefix, {input_dim, n_inputs}, Activation::kIdentity,
              Activation::kIdentity) {}

Var SoftmaxGate::Weights(Tape& tape, const Var& x) const {
  return SoftmaxRows(linear_.Forward(tape, x));
}

Var SoftmaxGate::Mix(Tape& tape, const Var& x,
                     const std::vector<Var>& candidates) const {
  if (candidates.size() != static_cast<std::size_t>(input_count())) {
    throw DimensionError("gate expects " + std::to_string(input_count()) +
                         " candidates, got " + std::to_string(candidates.size()));
  }
  Var w = Weights(tape, x);
  Var mixed;
  for (std::size_t e = 0; e < candidates.size(); ++e) {
    Var term = MulColumn(SliceCols(w, e, e + 1), candidates[e]);
    mixed = mixed.valid() ? Add(mixed, term) : term;
  }
  return mixed;
}

}  // namespace seqmd
