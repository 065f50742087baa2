#include <gtest/gtest.h>

#include <cmath>

#include "seqmd/error.h"
#include "seqmd/random.h"
#include "seqmd/tensorcore/grad_check.h"
#include "seqmd/tensorcore/layers.h"
#include "seqmd/tensorcore/ops.h"
#include "support/oracles.h"

namespace seqmd {
namespace {

Tensor Row(std::initializer_list<double> v) {
  return Tensor({1, v.size()}, std::vector<double>(v));
}

TEST(Tensor, ShapeMustMatchData) {
  EXPECT_THROW(Tensor({2, 3}, std::vector<double>(5)), DimensionError);
  Tensor t({2, 3}, 1.5);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(ShapeSize(t.shape()), t.size());
  EXPECT_TRUE(t.AllFinite());
  t[4] = std::nan("");
  EXPECT_FALSE(t.AllFinite());
}

TEST(Tape, SumGradientIsOnes) {
  Tape tape;
  Var x = tape.Leaf(Tensor::Matrix(2, 3, {1, -2, 3, 0.5, 7, -1}));
  tape.Backward(Sum(x));
  for (double g : tape.Grad(x).data()) EXPECT_EQ(g, 1.0);
  EXPECT_EQ(tape.Grad(x).shape(), x.value().shape());
}

TEST(Tape, SigmoidSlopeAtZero) {
  ParameterStore store;
  Parameter& w = store.Create("w", {1, 1}, InitKind::kZero);
  Tape tape;
  Var y = Sigmoid(MatMul(tape.Constant(Tensor::Scalar(1.0)), tape.Param(w)));
  tape.Backward(y);
  EXPECT_DOUBLE_EQ(w.grad[0], 0.25);
}

TEST(Tape, RejectsNonScalarAndForeignLoss) {
  Tape a, b;
  Var x = a.Leaf(Tensor({2, 2}, 1.0));
  EXPECT_THROW(a.Backward(x), DimensionError);
  Var s = b.Leaf(Tensor::Scalar(1.0));
  EXPECT_THROW(a.Backward(s), Error);
}

TEST(Tape, NonFiniteNamesTheOp) {
  Tape tape;
  Var x = tape.Constant(Tensor::Scalar(-1.0));
  try {
    Log(x);
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_EQ(e.op(), "log");
  }
}

TEST(Tape, SharedParamNodeAccumulates) {
  ParameterStore store;
  Parameter& w = store.Create("w", {1, 1}, InitKind::kZero);
  w.value[0] = 3.0;
  Tape tape;
  Var a = tape.Param(w);
  Var b = tape.Param(w);
  EXPECT_EQ(a.id(), b.id());
  tape.Backward(Mul(a, b));  // w^2
  EXPECT_DOUBLE_EQ(w.grad[0], 6.0);
}

TEST(Ops, ShapeMismatchThrows) {
  Tape tape;
  Var a = tape.Constant(Tensor({2, 3}));
  Var b = tape.Constant(Tensor({2, 2}));
  EXPECT_THROW(Add(a, b), DimensionError);
  EXPECT_THROW(MatMul(a, a), DimensionError);
  EXPECT_THROW(SliceCols(a, 2, 4), DimensionError);
}

TEST(Ops, CumProdAndSoftmaxValues) {
  Tape tape;
  Var a = tape.Constant(Tensor::Matrix(1, 3, {0.5, 0.4, 0.1}));
  Var c = CumProdCols(a);
  EXPECT_DOUBLE_EQ(c.value()(0, 2), 0.5 * 0.4 * 0.1);
  Var s = SoftmaxRows(tape.Constant(Tensor::Matrix(2, 3, {1, 2, 3, -1000, 0, 1000})));
  for (std::size_t r = 0; r < 2; ++r) {
    double sum = 0;
    for (double v : s.value().Row(r)) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Ops, EveryOpMatchesFiniteDifferences) {
  ParameterStore store(3);
  Parameter& a = store.Create("a", {3, 4}, InitKind::kFanInUniform);
  Parameter& b = store.Create("b", {4, 3}, InitKind::kFanInUniform);
  Parameter& r = store.Create("r", {1, 4}, InitKind::kFanInUniform);
  Rng rng(11);
  for (double& v : a.value.data()) v = rng.Uniform(0.2, 1.0);
  LossFn loss = [&](Tape& tape) {
    Var pa = tape.Param(a), pb = tape.Param(b), pr = tape.Param(r);
    Var m = MatMul(pa, pb);  // 3x3
    Var x = AddRow(pa, pr);
    Var parts[] = {Sigmoid(x), Tanh(m), Relu(AddScalar(x, -0.3)), Log(pa), Softplus(m),
                   Clamp(x, -0.5, 0.5), SoftmaxRows(m), CumProdCols(Sigmoid(x)),
                   MulColumn(SliceCols(m, 1, 2), x), OneMinus(Scale(x, 0.5)),
                   Sub(Mul(x, x), pa)};
    return Add(Mean(ConcatCols(parts)), Sum(Mul(m, m)));
  };
  GradCheckReport report = CheckGradients(loss, {&a, &b, &r});
  EXPECT_TRUE(report.passed()) << report.worst_param << " " << report.max_rel_err;
}

TEST(MlpBlock, IdentityAndZeroWeights) {
  ParameterStore store;
  MlpBlock mlp(store, "m", {3, 3}, Activation::kIdentity, Activation::kIdentity);
  mlp.weight(0).value = Tensor::Matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  Tape tape;
  Var y = mlp.Forward(tape, tape.Constant(Row({1, 2, 3})));
  EXPECT_EQ(y.value(), Row({1, 2, 3}));

  MlpBlock zero(store, "z", {3, 2, 2});
  for (std::size_t l = 0; l < zero.layer_count(); ++l) zero.weight(l).value.Fill(0.0);
  Var z = zero.Forward(tape, tape.Constant(Row({5, -4, 9})));
  EXPECT_EQ(z.value(), Tensor({1, 2}, 0.0));
}

TEST(MlpBlock, SeededValueMatchesHandMultiply) {
  ParameterStore store(0);
  MlpBlock mlp(store, "m", {2, 2}, Activation::kIdentity, Activation::kIdentity);
  Tape tape;
  Var y = mlp.Forward(tape, tape.Constant(Row({1, 0})));
  const oracle::Vec expect = oracle::Affine({1, 0}, mlp.weight(0).value, mlp.bias(0).value);
  EXPECT_EQ(y.value()(0, 0), expect[0]);
  EXPECT_EQ(y.value()(0, 1), expect[1]);
  EXPECT_EQ(expect[0], mlp.weight(0).value(0, 0));
}

TEST(MlpBlock, WidthMismatchAndCounts) {
  ParameterStore store;
  MlpBlock mlp(store, "m", {4, 3});
  Tape tape;
  EXPECT_THROW(mlp.Forward(tape, tape.Constant(Tensor({1, 5}))), DimensionError);
  EXPECT_EQ(MlpBlock::ParamCount({4, 3}), 15u);
  EXPECT_EQ(store.TotalSize(), 15u);
  EXPECT_EQ(MlpBlock::ParamCount({4, 3, 2}), 15u + 8u);
}

TEST(Init, FanInUniformBoundsAndZeroBias) {
  ParameterStore store(42);
  MlpBlock mlp(store, "m", {9, 50});
  const double bound = std::sqrt(1.0 / 9.0);
  for (double v : mlp.weight(0).value.data()) EXPECT_LE(std::abs(v), bound);
  for (double v : mlp.bias(0).value.data()) EXPECT_EQ(v, 0.0);
  ParameterStore other(42);
  MlpBlock again(other, "m", {9, 50});
  EXPECT_EQ(again.weight(0).value, mlp.weight(0).value);
  EXPECT_THROW(store.Create("m.l0.weight", {1, 1}, InitKind::kZero), ConfigError);
}

TEST(GruCell, ZeroWeightsFixedPoint) {
  ParameterStore store;
  GruCell cell(store, "g", 3, 2);
  for (Parameter* p : store.All()) p->value.Fill(0.0);
  Tape tape;
  Var h = cell.Step(tape, tape.Constant(Row({4, -2, 7})), tape.Constant(Tensor({1, 2})));
  EXPECT_EQ(h.value(), Tensor({1, 2}, 0.0));
}

TEST(GruCell, ZeroCandidateWeightsKeepZeroState) {
  ParameterStore store(5);
  GruCell cell(store, "g", 2, 3);
  cell.candidate().w->value.Fill(0.0);
  Tape tape;
  Var h = cell.Step(tape, tape.Constant(Row({1.5, -0.5})), tape.Constant(Tensor({1, 3})));
  EXPECT_EQ(h.value(), Tensor({1, 3}, 0.0));
}

TEST(GruCell, SeededStepMatchesScalarOracle) {
  ParameterStore store(0);
  GruCell cell(store, "g", 2, 2);
  for (Parameter* p : store.All()) {
    if (p->name.find(".b_") != std::string::npos) p->value.Fill(0.1);
  }
  Tape tape;
  const oracle::Vec x{1, 1}, h{0, 0};
  Var out = cell.Step(tape, tape.Constant(Row({1, 1})), tape.Constant(Tensor({1, 2})));
  const auto& z = cell.update_gate();
  const auto& r = cell.reset_gate();
  const auto& c = cell.candidate();
  const oracle::Vec expect = oracle::GruStep(x, h, z.w->value, z.u->value, z.b->value,
                                             r.w->value, r.u->value, r.b->value, c.w->value,
                                             c.u->value, c.b->value);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(out.value()(0, j), expect[j], 1e-15);

  // Non-zero previous state exercises the reset gate.
  const oracle::Vec h2{0.3, -0.6};
  Var out2 = cell.Step(tape, tape.Constant(Row({1, 1})), tape.Constant(Row({0.3, -0.6})));
  const oracle::Vec expect2 = oracle::GruStep(x, h2, z.w->value, z.u->value, z.b->value,
                                              r.w->value, r.u->value, r.b->value, c.w->value,
                                              c.u->value, c.b->value);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(out2.value()(0, j), expect2[j], 1e-15);
}

TEST(GruCell, StateStaysInOpenUnitBox) {
  ParameterStore store(9);
  GruCell cell(store, "g", 3, 4);
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    Tape tape;
    Tensor x({1, 3}), h({1, 4});
    for (double& v : x.data()) v = rng.Uniform(-20, 20);
    for (double& v : h.data()) v = rng.Uniform(-0.999, 0.999);
    Var out = cell.Step(tape, tape.Constant(x), tape.Constant(h));
    for (double v : out.value().data()) {
      EXPECT_GT(v, -1.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(GruCell, CountIndependentOfSequenceLength) {
  EXPECT_EQ(GruCell::ParamCount(4, 8), 312u);
  ParameterStore store;
  GruStack stack(store, "s", 4, 8, 1);
  const std::size_t before = store.TotalSize();
  EXPECT_EQ(before, 312u);
  Tape tape;
  std::vector<Var> tokens(7, tape.Constant(Tensor({2, 4}, 0.5)));
  auto outs = stack.Run(tape, tokens);
  EXPECT_EQ(outs.size(), 7u);
  EXPECT_EQ(store.TotalSize(), before);
}

TEST(GruCell, ShapeMismatch) {
  ParameterStore store;
  GruCell cell(store, "g", 2, 3);
  Tape tape;
  EXPECT_THROW(cell.Step(tape, tape.Constant(Tensor({1, 3})), tape.Constant(Tensor({1, 3}))),
               DimensionError);
  EXPECT_THROW(cell.Step(tape, tape.Constant(Tensor({1, 2})), tape.Constant(Tensor({1, 2}))),
               DimensionError);
}

TEST(SoftmaxGate, WeightsNormalized) {
  ParameterStore store(2);
  SoftmaxGate gate(store, "gate", 3, 4);
  Tape tape;
  Var w = gate.Weights(tape, tape.Constant(Tensor::Matrix(2, 3, {1, 2, 3, -4, 5, 0})));
  for (std::size_t r = 0; r < 2; ++r) {
    double s = 0;
    for (double v : w.value().Row(r)) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  SoftmaxGate single(store, "one", 3, 1);
  Var one = single.Weights(tape, tape.Constant(Tensor({5, 3}, 2.0)));
  for (double v : one.value().data()) EXPECT_EQ(v, 1.0);
}

TEST(GradCheck, LinearModelExact) {
  ParameterStore store;
  Parameter& w = store.Create("w", {1, 1}, InitKind::kZero);
  w.value[0] = 2.0;
  LossFn loss = [&](Tape& t) { return MatMul(t.Constant(Tensor::Scalar(3.0)), t.Param(w)); };
  GradCheckReport rep = CheckGradients(loss, {&w});
  ASSERT_EQ(rep.entries.size(), 1u);
  EXPECT_DOUBLE_EQ(rep.entries[0].analytic, 3.0);
  EXPECT_NEAR(rep.entries[0].numeric, 3.0, 1e-9);
  EXPECT_LT(rep.max_rel_err, 1e-9);
  EXPECT_EQ(w.value[0], 2.0);
}

TEST(GradCheck, ThreeLayerMlpWithBce) {
  ParameterStore store(17);
  MlpBlock mlp(store, "m", {4, 6, 5, 1}, Activation::kTanh, Activation::kIdentity);
  Rng rng(4);
  Tensor x({8, 4}), y({8, 1});
  for (double& v : x.data()) v = rng.Normal();
  for (double& v : y.data()) v = rng.Bernoulli(0.5) ? 1.0 : 0.0;
  LossFn loss = [&](Tape& t) {
    Var logit = mlp.Forward(t, t.Constant(x));
    Var yv = t.Constant(y);
    // softplus(l) - y*l
    return Mean(Sub(Softplus(logit), Mul(yv, logit)));
  };
  GradCheckReport rep = CheckGradients(loss, store.All());
  EXPECT_TRUE(rep.passed()) << rep.worst_param << " " << rep.max_rel_err;
  EXPECT_EQ(rep.entries.size(), store.TotalSize());
  for (std::size_t i = 1; i < rep.entries.size(); ++i) {
    EXPECT_GE(rep.entries[i - 1].rel_err, rep.entries[i].rel_err);
  }
}

TEST(GradCheck, FlagsCorruptedGradient) {
  ParameterStore store(1);
  MlpBlock mlp(store, "m", {3, 2});
  Parameter& target = mlp.weight(0);
  LossFn loss = [&](Tape& t) {
    Var w = t.Param(target);
    // Identity op whose backward adds 0.1 to element 1.
    Var bad = t.Record(OpKind::kCustom, {w}, w.value(), [](Tape& tp, std::size_t self) {
      const std::size_t in = tp.inputs(self)[0];
      Tensor& g = tp.GradBuffer(in);
      const Tensor& up = tp.Grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += up[i] + (i == 1 ? 0.1 : 0.0);
    });
    Var y = AddRow(MatMul(t.Constant(Tensor::Matrix(1, 3, {1, 2, 3})), bad), t.Param(mlp.bias(0)));
    return Sum(Mul(y, y));
  };
  GradCheckReport rep = CheckGradients(loss, store.All());
  EXPECT_FALSE(rep.passed());
  EXPECT_EQ(rep.worst_param, "m.l0.weight");
  EXPECT_EQ(rep.worst_index, 1u);
  ASSERT_EQ(rep.Failures().size(), 1u);
}

TEST(GradCheck, NonFiniteForwardIsAnError) {
  ParameterStore store;
  Parameter& w = store.Create("w", {1, 1}, InitKind::kZero);
  LossFn loss = [&](Tape& t) { return Log(t.Param(w)); };
  EXPECT_THROW(CheckGradients(loss, {&w}), NonFiniteError);
}

TEST(Determinism, BitIdenticalForwardAndGradients) {
  auto run = [] {
    ParameterStore store(123);
    GruStack stack(store, "s", 3, 4, 2);
    MlpBlock head(store, "h", {4, 1});
    Tape tape;
    std::vector<Var> toks{tape.Constant(Tensor::Matrix(2, 3, {1, 2, 3, 4, 5, 6})),
                          tape.Constant(Tensor::Matrix(2, 3, {-1, 0, 1, 0.5, 0.25, 0}))};
    auto outs = stack.Run(tape, toks);
    Var loss = Sum(Sigmoid(head.Forward(tape, outs.back())));
    tape.Backward(loss);
    std::vector<Tensor> grads;
    for (Parameter* p : store.All()) grads.push_back(p->grad);
    return std::make_pair(loss.value(), grads);
  };
  auto a = run();
  auto b = run();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

}  // namespace
}  // namespace seqmd
