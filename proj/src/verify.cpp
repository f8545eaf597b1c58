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

#include "xpinflate/verify.hpp"

#include "xpinflate/random.hpp"

namespace xpinflate {

namespace {

std::optional<Vector> find_flip(const Classifier& classifier, const Domain& domain, const Box& box,
                                const encoding::NegatedPrediction& negated,
                                const solver::SolverOptions& options) {
  const auto problem = encoding::build_entailment_problem(classifier, domain, box, negated);
  const auto outcome = encoding::solve_entailment(problem, options);
  if (outcome.status == solver::SolveStatus::kInfeasible) return std::nullopt;
  if (!outcome.has_point()) {
    throw SolverError(std::string("entailment check ended with status ") +
                      solver::to_string(outcome.status));
  }
  return Vector(outcome.witness.head(box.size()));
}

}  // namespace

VerificationResult verify_box(const Classifier& classifier, const Domain& domain, const Box& box,
                              ClassIndex predicted, const VerifyOptions& options) {
  const auto negated = encoding::encode_negated_prediction(classifier, predicted, options.tau);
  VerificationResult result;
  result.checker = is_linear(classifier) ? "lp-entailment" : "milp-entailment";
  auto witness = find_flip(classifier, domain, box, negated, options.solver);
  if (witness && predict(classifier, *witness) == predicted) {
    witness = find_flip(classifier, domain, box, encoding::with_margin(negated, options.tie_margin),
                        options.solver);
  }
  if (!witness) return result;
  result.verdict = Verdict::kViolated;
  result.counterexample = std::move(witness);
  return result;
}

VerificationResult verify_box(const Classifier& classifier, const Domain& domain,
                              const InflatedExplanation& explanation, ClassIndex predicted,
                              const VerifyOptions& options) {
  return verify_box(classifier, domain, ranges_box(domain, explanation.ranges), predicted, options);
}

VerificationResult verify_abductive(const Classifier& classifier, const Domain& domain,
                                    const AbductiveExplanation& explanation,
                                    const VerifyOptions& options) {
  return verify_box(classifier, domain, pinned_box(domain, explanation), explanation.predicted,
                    options);
}

std::pair<double, double> linear_box_extreme(const LinearClassifier& model, const Box& box) {
  check_dimension(model.num_features(), box.lower);
  const Vector& w = model.weights;
  const double low = w.cwiseMax(0.0).dot(box.lower) + w.cwiseMin(0.0).dot(box.upper) + model.bias;
  const double high = w.cwiseMax(0.0).dot(box.upper) + w.cwiseMin(0.0).dot(box.lower) + model.bias;
  return {low, high};
}

std::optional<Vector> sample_falsify(const Classifier& classifier, const Box& box,
                                     ClassIndex predicted, std::int64_t samples,
                                     std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  Vector point(box.size());
  for (std::int64_t s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < box.size(); ++i) point[i] = rng.uniform(box.lower[i], box.upper[i]);
    if (predict(classifier, point) != predicted) return point;
  }
  return std::nullopt;
}

std::optional<Vector> sample_falsify(const Classifier& classifier,
                                     const InflatedExplanation& explanation, const Domain& domain,
                                     std::int64_t samples, std::uint64_t seed,
                                     std::uint64_t stream) {
  return sample_falsify(classifier, ranges_box(domain, explanation.ranges), explanation.predicted,
                        samples, seed, stream);
}

bool check_minimality(const Classifier& classifier, const Domain& domain,
                      const AbductiveExplanation& explanation, const VerifyOptions& options) {
  const auto negated =
      encoding::encode_negated_prediction(classifier, explanation.predicted, options.tau);
  for (std::size_t k = 0; k < explanation.features.size(); ++k) {
    std::vector<PinnedFeature> pins;
    for (std::size_t j = 0; j < explanation.features.size(); ++j) {
      if (j != k) pins.push_back(explanation.features[j]);
    }
    const auto problem = encoding::build_entailment_problem(classifier, domain, pins, negated);
    const auto outcome = encoding::solve_entailment(problem, options.solver);
    if (outcome.status == solver::SolveStatus::kInfeasible) return false;
  }
  return true;
}

}  // namespace xpinflate
