/*
 * Copyright 2026 The xpinflate Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "xpinflate/encoding.hpp"

namespace xpinflate::encoding {
namespace {

using solver::Relation;
using solver::Sense;
using solver::SolveStatus;

LinearClassifier linear(Vector w, double b) {
  LinearClassifier model;
  model.weights = std::move(w);
  model.bias = b;
  return model;
}

MlpClassifier identity_net() {
  MlpClassifier model;
  model.layers = {{Matrix::Identity(2, 2), Vector::Zero(2)},
                  {Matrix::Identity(2, 2), Vector::Zero(2)}};
  return model;
}

MlpClassifier single_neuron(Vector w, double b) {
  MlpClassifier model;
  model.layers = {{w.transpose(), Vector{{b}}}, {Matrix{{1.0}, {-1.0}}, Vector::Zero(2)}};
  return model;
}

TEST(EncodeNegatedLinear, PositivePrediction) {
  const auto neg = encode_negated_linear(linear(Vector{{1.0, 1.0}}, -1.5), 1, 1e-6);
  ASSERT_EQ(neg.rows.size(), 1u);
  EXPECT_EQ(neg.rows[0].coefficients, (Vector{{1.0, 1.0}}));
  EXPECT_EQ(neg.rows[0].relation, Relation::kLessEqual);
  EXPECT_DOUBLE_EQ(neg.rows[0].rhs, 1.5 - 1e-6);
  EXPECT_TRUE(neg.rivals.empty());
}

TEST(EncodeNegatedLinear, NegativePrediction) {
  const auto neg = encode_negated_linear(linear(Vector{{1.0, 1.0}}, -1.5), 0);
  ASSERT_EQ(neg.rows.size(), 1u);
  EXPECT_EQ(neg.rows[0].relation, Relation::kGreaterEqual);
  EXPECT_DOUBLE_EQ(neg.rows[0].rhs, 1.5);
}

TEST(EncodeNegatedLinear, SingleFeature) {
  const auto neg = encode_negated_linear(linear(Vector{{1.0, 0.0}}, -0.5), 1, 1e-6);
  EXPECT_EQ(neg.rows[0].coefficients, (Vector{{1.0, 0.0}}));
  EXPECT_DOUBLE_EQ(neg.rows[0].rhs, 0.5 - 1e-6);
}

TEST(EncodeNegatedLinear, RejectsNonPositiveTau) {
  EXPECT_THROW(encode_negated_linear(linear(Vector{{1.0}}, 0.0), 1, 0.0), InputError);
}

TEST(EncodeMlpNetwork, IdentityNetCounts) {
  const auto enc = encode_mlp_network(identity_net(), Domain::unit(2));
  const auto& p = enc.program;
  EXPECT_EQ(p.binaries().size(), 2u);
  EXPECT_EQ(enc.variables.relu_outputs.size() + enc.variables.relu_slacks.size(), 4u);
  EXPECT_EQ(p.base().num_rows(), 4);  // 2 hidden equalities, 2 output equalities
  for (const auto& row : p.base().rows()) EXPECT_EQ(row.relation, Relation::kEqual);
  EXPECT_EQ(p.indicators().size(), 4u);
  EXPECT_EQ(enc.variables.inputs, (std::vector<int>{0, 1}));
}

TEST(EncodeMlpNetwork, StablyInactiveNeuronFixedAtPresolve) {
  // f1 + f2 - 2.2 over [0.6, 1]^2 spans [-1, -0.2].
  const auto model = single_neuron(Vector{{1.0, 1.0}}, -2.2);
  const Domain box{Vector{{0.6, 0.6}}, Vector{{1.0, 1.0}}};
  EncodingOptions options;
  options.fix_stable_neurons = true;
  const auto enc = encode_mlp_network(model, box, options);
  EXPECT_NEAR(enc.bounds.hidden[0].lower, -1.0, 1e-12);
  EXPECT_NEAR(enc.bounds.hidden[0].upper, -0.2, 1e-12);
  EXPECT_EQ(stable_phase(enc.bounds.hidden[0]), NeuronPhase::kInactive);
  const auto& z = enc.program.base().variables()[enc.variables.phases[0]];
  EXPECT_EQ(z.lower, 1.0);
  EXPECT_EQ(z.upper, 1.0);

  const auto plain = encode_mlp_network(model, box);
  EXPECT_EQ(plain.program.base().variables()[plain.variables.phases[0]].lower, 0.0);
}

TEST(EncodeMlpNetwork, ZeroNeuronFeasibleUnderEitherPhase) {
  const auto enc = encode_mlp_network(single_neuron(Vector{{0.0, 0.0}}, 0.0), Domain::unit(2));
  for (double zv : {0.0, 1.0}) {
    auto p = enc.program;
    auto& z = p.base().variables()[enc.variables.phases[0]];
    z.lower = z.upper = zv;
    const auto out = solve_entailment(p);
    ASSERT_EQ(out.status, SolveStatus::kFeasible) << "z=" << zv;
    EXPECT_NEAR(out.witness[enc.variables.relu_outputs[0]], 0.0, 1e-9);
    EXPECT_NEAR(out.witness[enc.variables.relu_slacks[0]], 0.0, 1e-9);
  }
}

TEST(EncodeMlpNetwork, DomainDimensionMismatch) {
  EXPECT_THROW(encode_mlp_network(identity_net(), Domain::unit(3)), InputError);
}

MlpClassifier three_class_net() {
  std::mt19937_64 rng(5);
  return testing::random_mlp(rng, 2, 3, 3);
}

TEST(EncodeNegatedMlp, ThreeClasses) {
  const auto net = three_class_net();
  const auto neg = encode_negated_mlp_prediction(net, 1);
  EXPECT_EQ(neg.rivals, (std::vector<ClassIndex>{0, 2}));
  auto enc = encode_mlp_network(net, Domain::unit(2));
  const auto before_rows = enc.program.base().num_rows();
  const auto r = append_negated_mlp_prediction(enc.program, enc.variables, neg);
  ASSERT_EQ(r.size(), 2u);
  ASSERT_EQ(enc.program.base().num_rows(), before_rows + 1);
  const auto& cover = enc.program.base().rows().back();
  EXPECT_EQ(cover.relation, Relation::kGreaterEqual);
  EXPECT_EQ(cover.rhs, 1.0);
  EXPECT_EQ(cover.coefficients[r[0]], 1.0);
  EXPECT_EQ(cover.coefficients[r[1]], 1.0);
  EXPECT_EQ(cover.coefficients.cwiseAbs().sum(), 2.0);
}

TEST(EncodeNegatedMlp, TwoClassesForcesSingleRival) {
  const auto net = identity_net();
  auto enc = encode_mlp_network(net, Domain::unit(2));
  const auto r = append_negated_mlp_prediction(enc.program, enc.variables,
                                               encode_negated_mlp_prediction(net, 0));
  ASSERT_EQ(r.size(), 1u);
  // Pin x = (0.8, 0.2): o0 > o1, so o0 <= o1 cannot be made active.
  for (int i = 0; i < 2; ++i) {
    auto& v = enc.program.base().variables()[i];
    v.lower = v.upper = i == 0 ? 0.8 : 0.2;
  }
  EXPECT_EQ(solve_entailment(enc.program).status, SolveStatus::kInfeasible);
  // Fixing r to 0 violates the covering row.
  auto forced = enc.program;
  for (int i = 0; i < 2; ++i) {
    auto& v = forced.base().variables()[i];
    v.lower = v.upper = i == 0 ? 0.2 : 0.8;
  }
  auto& rv = forced.base().variables()[r[0]];
  rv.lower = rv.upper = 0.0;
  EXPECT_EQ(solve_entailment(forced).status, SolveStatus::kInfeasible);
}

TEST(EncodeNegatedMlp, OutOfRangeClass) {
  EXPECT_THROW(encode_negated_mlp_prediction(three_class_net(), 3), InputError);
  EXPECT_THROW(encode_negated_mlp_prediction(three_class_net(), -1), InputError);
}

TEST(PropagateNeuronBounds, Examples) {
  auto b = propagate_neuron_bounds(single_neuron(Vector{{1.0, -1.0}}, 0.0), Domain::unit(2));
  EXPECT_DOUBLE_EQ(b.hidden[0].lower, -1.0);
  EXPECT_DOUBLE_EQ(b.hidden[0].upper, 1.0);

  MlpClassifier ident;
  ident.layers = {{Matrix{{1.0}}, Vector::Zero(1)}, {Matrix{{1.0}, {-1.0}}, Vector::Zero(2)}};
  b = propagate_neuron_bounds(ident, Domain::unit(1));
  EXPECT_DOUBLE_EQ(b.hidden[0].lower, 0.0);
  EXPECT_DOUBLE_EQ(b.hidden[0].upper, 1.0);

  b = propagate_neuron_bounds(single_neuron(Vector{{2.0, 1.0}}, -2.0), Domain::unit(2));
  EXPECT_DOUBLE_EQ(b.hidden[0].lower, -2.0);
  EXPECT_DOUBLE_EQ(b.hidden[0].upper, 1.0);
}

TEST(PropagateNeuronBounds, SoundOnSampledPoints) {
  std::mt19937_64 rng(21);
  const Domain domain{Vector{{-1.0, 0.0, 2.0}}, Vector{{1.0, 0.5, 3.0}}};
  const auto net = testing::random_mlp(rng, 3, 5, 3);
  const auto bounds = propagate_neuron_bounds(net, domain);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = testing::random_point(rng, domain);
    const Vector pre = hidden_preactivations(net, x);
    const Vector out = mlp_outputs(net, x);
    for (int j = 0; j < pre.size(); ++j) {
      EXPECT_LE(bounds.hidden[j].lower, pre[j]);
      EXPECT_GE(bounds.hidden[j].upper, pre[j]);
    }
    for (int j = 0; j < out.size(); ++j) {
      EXPECT_LE(bounds.outputs[j].lower, out[j] + 1e-12);
      EXPECT_GE(bounds.outputs[j].upper, out[j] - 1e-12);
    }
  }
}

TEST(EncodingFidelity, PinnedInputsReproduceForwardPass) {
  std::mt19937_64 rng(31);
  for (int net_index = 0; net_index < 3; ++net_index) {
    const auto net = testing::random_mlp(rng, 3, 4, 3);
    const auto domain = Domain::unit(3);
    for (int k = 0; k < 100; ++k) {
      const Vector x = testing::random_point(rng, domain);
      const Domain pinned{x, x};
      const auto enc = encode_mlp_network(net, pinned);
      const Vector expected = mlp_outputs(net, x);
      for (int j = 0; j < 3; ++j) {
        const int o = enc.variables.outputs[j];
        const auto lo = optimise_feature(enc.program, o, Sense::kMinimize);
        const auto hi = optimise_feature(enc.program, o, Sense::kMaximize);
        ASSERT_EQ(lo.status, SolveStatus::kOptimal);
        ASSERT_EQ(hi.status, SolveStatus::kOptimal);
        EXPECT_NEAR(lo.objective, expected[j], 1e-5);
        EXPECT_NEAR(hi.objective, expected[j], 1e-5);
      }
      const ClassIndex predicted = predict_mlp(net, x);
      for (ClassIndex c = 0; c < 3; ++c) {
        const auto problem = build_entailment_problem(net, domain, pinned,
                                                      encode_negated_mlp_prediction(net, c));
        const bool feasible = solve_entailment(problem).has_point();
        EXPECT_EQ(feasible, c != predicted) << "net " << net_index << " point " << k;
      }
    }
  }
}

const LinearClassifier kFixtureA = linear(Vector{{1.0, 1.0}}, -1.5);

TEST(BuildEntailment, FixtureAFullyPinned) {
  const auto problem = build_entailment_problem(
      kFixtureA, Domain::unit(2), std::vector<PinnedFeature>{{0, 0.9}, {1, 0.9}},
      encode_negated_linear(kFixtureA, 1));
  EXPECT_TRUE(problem.binaries().empty());
  EXPECT_EQ(solve_entailment(problem).status, SolveStatus::kInfeasible);
}

TEST(BuildEntailment, FixtureAOnlySecondPinned) {
  auto problem = build_entailment_problem(kFixtureA, Domain::unit(2),
                                          std::vector<PinnedFeature>{{1, 0.9}},
                                          encode_negated_linear(kFixtureA, 1));
  const auto out = solve_entailment(problem);
  ASSERT_EQ(out.status, SolveStatus::kFeasible);
  EXPECT_NEAR(out.witness[1], 0.9, 1e-12);
  EXPECT_LE(out.witness[0] + out.witness[1], 1.5 - 1e-6 + 1e-9);
  // The witness the oracle names, f1 = 0, is the minimiser of f1.
  const auto lowest = optimise_feature(problem, 0, Sense::kMinimize);
  EXPECT_NEAR(lowest.witness[0], 0.0, 1e-12);
  EXPECT_LT(linear_score(kFixtureA, Vector(lowest.witness.head(2))), 0.0);
}

TEST(BuildEntailment, ConstantSignModelEmptySet) {
  const auto model = linear(Vector{{1.0, 0.0}}, 0.5);
  const auto problem = build_entailment_problem(model, Domain::unit(2),
                                                std::vector<PinnedFeature>{},
                                                encode_negated_linear(model, 1));
  EXPECT_EQ(solve_entailment(problem).status, SolveStatus::kInfeasible);
}

TEST(BuildEntailment, IndexOutOfRange) {
  EXPECT_THROW(build_entailment_problem(kFixtureA, Domain::unit(2),
                                        std::vector<PinnedFeature>{{2, 0.1}},
                                        encode_negated_linear(kFixtureA, 1)),
               InputError);
}

TEST(BuildEntailment, LinearPathHasNoBinaries) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 20; ++k) {
    const auto model = testing::random_linear(rng, 4);
    const Box box = Domain::unit(4);
    const auto problem =
        build_entailment_problem(model, Domain::unit(4), box, encode_negated_linear(model, k % 2));
    EXPECT_TRUE(problem.binaries().empty());
    EXPECT_TRUE(problem.indicators().empty());
  }
}

TEST(BuildEntailment, MlpNegationHasOneBinaryPerRival) {
  const auto net = three_class_net();
  const auto enc = encode_mlp_network(net, Domain::unit(2));
  const auto problem = build_entailment_problem(net, Domain::unit(2), Domain::unit(2),
                                                encode_negated_mlp_prediction(net, 0));
  EXPECT_EQ(problem.binaries().size(), enc.program.binaries().size() + 2);
}

}  // namespace
}  // namespace xpinflate::encoding
