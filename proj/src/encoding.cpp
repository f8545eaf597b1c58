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

#include "xpinflate/encoding.hpp"

#include <algorithm>
#include <string>

namespace xpinflate {

Box pinned_box(const Domain& domain, const std::vector<PinnedFeature>& pins) {
  Box box = domain;
  std::vector<bool> seen(static_cast<std::size_t>(domain.size()), false);
  for (const auto& pin : pins) {
    if (pin.feature < 0 || pin.feature >= domain.size()) {
      throw InputError("pinned feature index " + std::to_string(pin.feature) +
                       " out of range for " + std::to_string(domain.size()) + " features");
    }
    if (seen[pin.feature]) {
      throw InputError("feature " + std::to_string(pin.feature) + " pinned twice");
    }
    seen[pin.feature] = true;
    box.lower[pin.feature] = pin.value;
    box.upper[pin.feature] = pin.value;
  }
  return box;
}

Box pinned_box(const Domain& domain, const AbductiveExplanation& explanation) {
  return pinned_box(domain, explanation.features);
}

Box ranges_box(const Domain& domain, const std::vector<FeatureRange>& ranges) {
  Box box = domain;
  std::vector<bool> seen(static_cast<std::size_t>(domain.size()), false);
  for (const auto& range : ranges) {
    if (range.feature < 0 || range.feature >= domain.size()) {
      throw InputError("boxed feature index " + std::to_string(range.feature) +
                       " out of range for " + std::to_string(domain.size()) + " features");
    }
    if (seen[range.feature]) {
      throw InputError("feature " + std::to_string(range.feature) + " boxed twice");
    }
    if (range.lower > range.upper) {
      throw InputError("feature " + std::to_string(range.feature) + " has an empty range");
    }
    seen[range.feature] = true;
    box.lower[range.feature] = range.lower;
    box.upper[range.feature] = range.upper;
  }
  return box;
}

namespace encoding {

using solver::Interval;
using solver::MixedIntegerProgram;
using solver::Relation;
using solver::Terms;

NegatedPrediction encode_negated_linear(const LinearClassifier& model, ClassIndex predicted,
                                        double tau) {
  if (!(tau > 0.0)) throw InputError("strictness tolerance must be positive");
  if (predicted != LinearClassifier::kPositive && predicted != LinearClassifier::kNegative) {
    throw InputError("linear classifier has no class " + std::to_string(predicted));
  }
  NegatedPrediction negated;
  negated.predicted = predicted;
  if (predicted == LinearClassifier::kPositive) {
    // Flip to w.f + b < 0, closed as w.f + b <= -tau.
    negated.rows.push_back({model.weights, Relation::kLessEqual, -model.bias - tau});
  } else {
    negated.rows.push_back({model.weights, Relation::kGreaterEqual, -model.bias});
  }
  return negated;
}

NegatedPrediction encode_negated_mlp_prediction(const MlpClassifier& model, ClassIndex predicted) {
  const int classes = model.num_classes();
  if (classes < 2) throw InputError("negated prediction needs at least two classes");
  if (predicted < 0 || predicted >= classes) {
    throw InputError("predicted class " + std::to_string(predicted) + " out of range for " +
                     std::to_string(classes) + " outputs");
  }
  NegatedPrediction negated;
  negated.predicted = predicted;
  for (ClassIndex j = 0; j < classes; ++j) {
    if (j != predicted) negated.rivals.push_back(j);
  }
  return negated;
}

NegatedPrediction encode_negated_prediction(const Classifier& classifier, ClassIndex predicted,
                                            double tau) {
  if (const auto* linear = std::get_if<LinearClassifier>(&classifier)) {
    return encode_negated_linear(*linear, predicted, tau);
  }
  return encode_negated_mlp_prediction(std::get<MlpClassifier>(classifier), predicted);
}

namespace {

Interval affine_interval(const Eigen::Ref<const Eigen::RowVectorXd>& weights, double bias,
                         const std::vector<Interval>& inputs) {
  Interval out{bias, bias};
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    const double a = w * inputs[i].lower;
    const double b = w * inputs[i].upper;
    out.lower += std::min(a, b);
    out.upper += std::max(a, b);
  }
  return out;
}

void check_domain(const Domain& domain, Eigen::Index features) {
  if (domain.size() != features) {
    throw InputError("domain has " + std::to_string(domain.size()) + " features, model expects " +
                     std::to_string(features));
  }
  domain.validate();
}

}  // namespace

NeuronBounds propagate_neuron_bounds(const MlpClassifier& model, const Domain& domain) {
  model.validate();
  check_domain(domain, model.num_features());
  std::vector<Interval> inputs;
  for (Eigen::Index i = 0; i < domain.size(); ++i) inputs.push_back({domain.lower[i], domain.upper[i]});

  NeuronBounds bounds;
  const auto& hidden = model.layers.front();
  std::vector<Interval> activations;
  for (Eigen::Index j = 0; j < hidden.weights.rows(); ++j) {
    const Interval pre = affine_interval(hidden.weights.row(j), hidden.bias[j], inputs);
    bounds.hidden.push_back(pre);
    activations.push_back({std::max(0.0, pre.lower), std::max(0.0, pre.upper)});
  }
  const auto& out = model.layers.back();
  for (Eigen::Index k = 0; k < out.weights.rows(); ++k) {
    bounds.outputs.push_back(affine_interval(out.weights.row(k), out.bias[k], activations));
  }
  return bounds;
}

NeuronPhase stable_phase(const Interval& preactivation) {
  if (preactivation.upper <= 0.0) return NeuronPhase::kInactive;
  if (preactivation.lower >= 0.0) return NeuronPhase::kActive;
  return NeuronPhase::kUnstable;
}

MlpEncoding encode_mlp_network(const MlpClassifier& model, const Domain& domain,
                               const EncodingOptions& options) {
  MlpEncoding enc;
  enc.bounds = propagate_neuron_bounds(model, domain);
  auto& program = enc.program;
  auto& vars = enc.variables;

  const Eigen::Index n = model.num_features();
  for (Eigen::Index i = 0; i < n; ++i) {
    vars.inputs.push_back(
        program.add_variable("f" + std::to_string(i), domain.lower[i], domain.upper[i]));
  }

  const auto& hidden = model.layers.front();
  for (Eigen::Index j = 0; j < hidden.weights.rows(); ++j) {
    const Interval pre = enc.bounds.hidden[j];
    const std::string tag = std::to_string(j);
    const int x = program.add_variable("x" + tag, 0.0, std::max(0.0, pre.upper));
    const int s = program.add_variable("s" + tag, 0.0, std::max(0.0, -pre.lower));
    const int z = program.add_binary("z" + tag);
    vars.relu_outputs.push_back(x);
    vars.relu_slacks.push_back(s);
    vars.phases.push_back(z);

    // w.f + b = x - s
    Terms terms;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (hidden.weights(j, i) != 0.0) terms.emplace_back(vars.inputs[i], hidden.weights(j, i));
    }
    terms.emplace_back(x, -1.0);
    terms.emplace_back(s, 1.0);
    program.base().add_row(terms, Relation::kEqual, -hidden.bias[j]);

    program.add_indicator(z, 1, {{x, 1.0}}, Relation::kLessEqual, 0.0);
    program.add_indicator(z, 0, {{s, 1.0}}, Relation::kLessEqual, 0.0);

    if (options.fix_stable_neurons) {
      auto& zv = program.base().variables()[z];
      switch (stable_phase(pre)) {
        case NeuronPhase::kInactive: zv.lower = zv.upper = 1.0; break;
        case NeuronPhase::kActive: zv.lower = zv.upper = 0.0; break;
        case NeuronPhase::kUnstable: break;
      }
    }
  }

  const auto& out = model.layers.back();
  for (Eigen::Index k = 0; k < out.weights.rows(); ++k) {
    const Interval range = enc.bounds.outputs[k];
    const int o = program.add_variable("o" + std::to_string(k), range.lower, range.upper);
    vars.outputs.push_back(o);
    // o = W x + b
    Terms terms{{o, 1.0}};
    for (Eigen::Index j = 0; j < out.weights.cols(); ++j) {
      if (out.weights(k, j) != 0.0) terms.emplace_back(vars.relu_outputs[j], -out.weights(k, j));
    }
    program.base().add_row(terms, Relation::kEqual, out.bias[k]);
  }
  return enc;
}

NegatedPrediction with_margin(NegatedPrediction negated, double margin) {
  if (!(margin >= 0.0)) throw InputError("margin must be nonnegative");
  for (auto& row : negated.rows) {
    if (row.relation == Relation::kLessEqual) row.rhs -= margin;
    if (row.relation == Relation::kGreaterEqual) row.rhs += margin;
  }
  negated.margin += margin;
  return negated;
}

std::vector<int> append_negated_mlp_prediction(MixedIntegerProgram& program,
                                               const NetworkVariables& network,
                                               const NegatedPrediction& negated) {
  const int classes = static_cast<int>(network.outputs.size());
  if (negated.predicted < 0 || negated.predicted >= classes) {
    throw InputError("predicted class " + std::to_string(negated.predicted) +
                     " out of range for " + std::to_string(classes) + " outputs");
  }
  std::vector<int> selectors;
  Terms cover;
  for (ClassIndex j : negated.rivals) {
    if (j < 0 || j >= classes || j == negated.predicted) {
      throw InputError("invalid rival class " + std::to_string(j));
    }
    const int r = program.add_binary("r" + std::to_string(j));
    selectors.push_back(r);
    cover.emplace_back(r, 1.0);
  }
  program.base().add_row(cover, Relation::kGreaterEqual, 1.0);
  const int winner = network.outputs[negated.predicted];
  for (std::size_t k = 0; k < negated.rivals.size(); ++k) {
    const int rival = network.outputs[negated.rivals[k]];
    program.add_indicator(selectors[k], 1, {{winner, 1.0}, {rival, -1.0}}, Relation::kLessEqual,
                          -negated.margin);
  }
  return selectors;
}

MixedIntegerProgram build_entailment_problem(const Classifier& classifier, const Domain& domain,
                                             const Box& box, const NegatedPrediction& negated,
                                             const EncodingOptions& options) {
  const Eigen::Index n = num_features(classifier);
  check_domain(domain, n);
  if (box.size() != n) {
    throw InputError("box has " + std::to_string(box.size()) + " features, model expects " +
                     std::to_string(n));
  }

  if (is_linear(classifier)) {
    if (negated.rows.empty()) throw InputError("linear classifier needs a linear negated prediction");
    solver::LinearProgram lp;
    for (Eigen::Index i = 0; i < n; ++i) {
      lp.add_variable("f" + std::to_string(i), box.lower[i], box.upper[i]);
    }
    for (const auto& condition : negated.rows) {
      if (condition.coefficients.size() != n) {
        throw InputError("negated prediction row has wrong dimension");
      }
      lp.add_row({condition.coefficients, condition.relation, condition.rhs});
    }
    return MixedIntegerProgram(std::move(lp));
  }

  const auto& mlp = std::get<MlpClassifier>(classifier);
  if (negated.rivals.empty()) throw InputError("MLP classifier needs an output-neuron negation");
  MlpEncoding enc = encode_mlp_network(mlp, box, options);
  append_negated_mlp_prediction(enc.program, enc.variables, negated);
  return std::move(enc.program);
}

MixedIntegerProgram build_entailment_problem(const Classifier& classifier, const Domain& domain,
                                             const std::vector<PinnedFeature>& fixed,
                                             const NegatedPrediction& negated,
                                             const EncodingOptions& options) {
  check_domain(domain, num_features(classifier));
  return build_entailment_problem(classifier, domain, pinned_box(domain, fixed), negated, options);
}

MixedIntegerProgram build_entailment_problem(const Classifier& classifier, const Domain& domain,
                                             const InflatedExplanation& boxes,
                                             const NegatedPrediction& negated,
                                             const EncodingOptions& options) {
  check_domain(domain, num_features(classifier));
  return build_entailment_problem(classifier, domain, ranges_box(domain, boxes.ranges), negated,
                                  options);
}

solver::SolveOutcome solve_entailment(const MixedIntegerProgram& problem,
                                      const solver::SolverOptions& options) {
  if (problem.binaries().empty()) {
    solver::LinearProgram lp = problem.base();
    lp.set_objective(solver::Sense::kFeasibility, Eigen::VectorXd{});
    return solver::solve_lp(lp, options);
  }
  return solver::solve_milp(problem, solver::Sense::kFeasibility, options);
}

solver::SolveOutcome optimise_feature(MixedIntegerProgram problem, int feature,
                                      solver::Sense sense, const solver::SolverOptions& options) {
  if (feature < 0 || feature >= problem.base().num_variables()) {
    throw InputError("objective feature " + std::to_string(feature) + " out of range");
  }
  problem.base().set_objective(sense, solver::Terms{{feature, 1.0}});
  if (problem.binaries().empty()) return solver::solve_lp(problem.base(), options);
  return solver::solve_milp(problem, sense, options);
}

}  // namespace encoding
}  // namespace xpinflate
