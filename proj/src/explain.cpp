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

#include "xpinflate/explain.hpp"

#include <string>

namespace xpinflate {

std::vector<int> natural_order(Eigen::Index n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  return order;
}

void validate_order(const std::vector<int>& order, Eigen::Index n) {
  if (static_cast<Eigen::Index>(order.size()) != n) {
    throw InputError("feature order lists " + std::to_string(order.size()) + " features, expected " +
                     std::to_string(n));
  }
  std::vector<bool> seen(order.size(), false);
  for (int f : order) {
    if (f < 0 || f >= n || seen[f]) {
      throw InputError("feature order is not a permutation (offending entry " + std::to_string(f) +
                       ")");
    }
    seen[f] = true;
  }
}

AbductiveExplanation abductive_explanation(const Classifier& classifier, const Vector& x,
                                           const Domain& domain, const ExplainOptions& options) {
  const Eigen::Index n = num_features(classifier);
  check_dimension(n, x);
  if (domain.size() != n) throw InputError("domain dimension does not match the model");
  if (!domain.contains(x)) throw InputError("instance lies outside the feature domain");

  AbductiveExplanation result;
  result.instance = x;
  result.predicted = predict(classifier, x);
  result.order = options.order.empty() ? natural_order(n) : options.order;
  validate_order(result.order, n);

  const auto negated = encoding::encode_negated_prediction(classifier, result.predicted, options.tau);

  std::vector<bool> pinned(static_cast<std::size_t>(n), true);
  auto pins_without = [&](int skip) {
    std::vector<PinnedFeature> pins;
    for (int f : result.order) {
      if (pinned[f] && f != skip) pins.push_back({f, x[f]});
    }
    return pins;
  };

  for (int f : result.order) {
    const auto problem = encoding::build_entailment_problem(classifier, domain, pins_without(f),
                                                            negated, options.encoding);
    solver::SolveOutcome outcome;
    try {
      outcome = encoding::solve_entailment(problem, options.solver);
    } catch (const ResourceError& e) {
      throw ResourceError("abductive explanation stopped at feature " + std::to_string(f) +
                              " after " + std::to_string(result.entailment_checks) +
                              " checks: " + e.what(),
                          e.incumbent(), e.incumbent_value());
    }
    ++result.entailment_checks;
    if (outcome.status == solver::SolveStatus::kInfeasible) pinned[f] = false;
  }

  result.features = pins_without(-1);
  return result;
}

}  // namespace xpinflate
