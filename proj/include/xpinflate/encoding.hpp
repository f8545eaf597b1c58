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

// Translation of classifiers, boxes and negated predictions into solver
// problems. Feature variables always occupy indices [0, n) so a witness's
// head is a point in feature space.

#pragma once

#include <vector>

#include "xpinflate/explanation.hpp"
#include "xpinflate/models.hpp"
#include "xpinflate/solver.hpp"

namespace xpinflate::encoding {

inline constexpr double kDefaultTau = 1e-6;

// Linear side condition over the feature vector: coefficients . f (rel) rhs.
struct LinearCondition {
  Vector coefficients;
  solver::Relation relation = solver::Relation::kLessEqual;
  double rhs = 0.0;
};

// Constraint set asserting that the prediction flips.
struct NegatedPrediction {
  ClassIndex predicted = 0;
  // Linear classifiers: a single row, no binaries.
  std::vector<LinearCondition> rows;
  // MLP classifiers: one r-binary per rival class, sum r >= 1,
  // r_j = 1 -> o_predicted <= o_j.
  std::vector<ClassIndex> rivals;
  // MLP only: r_j = 1 -> o_predicted - o_j <= -margin.
  double margin = 0.0;
};

NegatedPrediction encode_negated_linear(const LinearClassifier& model, ClassIndex predicted,
                                        double tau = kDefaultTau);

NegatedPrediction encode_negated_mlp_prediction(const MlpClassifier& model, ClassIndex predicted);

NegatedPrediction encode_negated_prediction(const Classifier& classifier, ClassIndex predicted,
                                            double tau = kDefaultTau);

// Tightens every flip condition by `margin` on the score/output scale.
NegatedPrediction with_margin(NegatedPrediction negated, double margin);

struct NeuronBounds {
  std::vector<solver::Interval> hidden;  // pre-activation intervals
  std::vector<solver::Interval> outputs;
};

// Interval arithmetic through the network over the given input box.
NeuronBounds propagate_neuron_bounds(const MlpClassifier& model, const Domain& domain);

enum class NeuronPhase { kUnstable, kActive, kInactive };

NeuronPhase stable_phase(const solver::Interval& preactivation);

struct EncodingOptions {
  // Fix the phase binary of neurons whose pre-activation sign is determined
  // by the input box.
  bool fix_stable_neurons = false;
};

struct NetworkVariables {
  std::vector<int> inputs;
  std::vector<int> relu_outputs;   // x_j
  std::vector<int> relu_slacks;    // s_j
  std::vector<int> phases;         // z_j
  std::vector<int> outputs;        // o_k
};

struct MlpEncoding {
  solver::MixedIntegerProgram program;
  NetworkVariables variables;
  NeuronBounds bounds;
};

// Inputs are bounded by `domain`; all auxiliary variables receive finite
// bounds from interval propagation.
MlpEncoding encode_mlp_network(const MlpClassifier& model, const Domain& domain,
                               const EncodingOptions& options = {});

// Appends the r-binaries, their indicator rows and the covering row. Returns
// the indices of the r-binaries.
std::vector<int> append_negated_mlp_prediction(solver::MixedIntegerProgram& program,
                                               const NetworkVariables& network,
                                               const NegatedPrediction& negated);

// E u D u {not P}: infeasible iff the prediction is entailed by `box`.
solver::MixedIntegerProgram build_entailment_problem(const Classifier& classifier,
                                                     const Domain& domain, const Box& box,
                                                     const NegatedPrediction& negated,
                                                     const EncodingOptions& options = {});

solver::MixedIntegerProgram build_entailment_problem(const Classifier& classifier,
                                                     const Domain& domain,
                                                     const std::vector<PinnedFeature>& fixed,
                                                     const NegatedPrediction& negated,
                                                     const EncodingOptions& options = {});

solver::MixedIntegerProgram build_entailment_problem(const Classifier& classifier,
                                                     const Domain& domain,
                                                     const InflatedExplanation& boxes,
                                                     const NegatedPrediction& negated,
                                                     const EncodingOptions& options = {});

// Feasibility check routed through the LP solver when there are no binaries.
solver::SolveOutcome solve_entailment(const solver::MixedIntegerProgram& problem,
                                      const solver::SolverOptions& options = {});

// Minimises or maximises a single feature over the entailment problem.
solver::SolveOutcome optimise_feature(solver::MixedIntegerProgram problem, int feature,
                                      solver::Sense sense,
                                      const solver::SolverOptions& options = {});

}  // namespace xpinflate::encoding
