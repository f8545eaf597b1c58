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

#include "xpinflate/inflate.hpp"

#include <algorithm>
#include <chrono>
#include <string>

namespace xpinflate {

const char* to_string(InflationMethod method) {
  switch (method) {
    case InflationMethod::kOnestep: return "onestep";
    case InflationMethod::kTwostep: return "twostep";
    case InflationMethod::kIncremental: return "incremental";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;
using solver::Sense;
using solver::SolveStatus;

void check_inputs(const Classifier& classifier, const Domain& domain,
                  const AbductiveExplanation& explanation, const InflateOptions& options) {
  const Eigen::Index n = num_features(classifier);
  if (domain.size() != n) throw InputError("domain dimension does not match the model");
  check_dimension(n, explanation.instance);
  if (!domain.contains(explanation.instance)) {
    throw InputError("instance lies outside the feature domain");
  }
  if (!(options.epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!(options.tau > 0.0)) throw InputError("tau must be positive");
  for (const auto& pin : explanation.features) {
    if (pin.feature < 0 || pin.feature >= n) {
      throw InputError("explanation feature " + std::to_string(pin.feature) + " out of range");
    }
    if (pin.value != explanation.instance[pin.feature]) {
      throw InputError("explanation pins feature " + std::to_string(pin.feature) +
                       " to a value different from the instance");
    }
  }
}

// Runs the per-feature optimisation problems against a shared box and keeps
// the call count.
class RangeSearch {
 public:
  RangeSearch(const Classifier& classifier, const Domain& domain, ClassIndex predicted,
              const InflateOptions& options)
      : classifier_(classifier),
        domain_(domain),
        options_(options),
        negated_(encoding::encode_negated_prediction(classifier, predicted, options.tau)) {}

  // Smallest prediction-flipping value of `feature` within [from, domain upper],
  // backed off by epsilon but never below `floor`.
  double upper(Box box, int feature, double from, double floor) {
    box.lower[feature] = from;
    box.upper[feature] = domain_.upper[feature];
    const auto outcome = solve(box, feature, Sense::kMinimize);
    if (outcome.status == SolveStatus::kInfeasible) return domain_.upper[feature];
    return std::max(floor, outcome.objective - options_.epsilon);
  }

  // Largest prediction-flipping value within [domain lower, from], moved up by
  // epsilon but never above `ceiling`.
  double lower(Box box, int feature, double from, double ceiling) {
    box.lower[feature] = domain_.lower[feature];
    box.upper[feature] = from;
    const auto outcome = solve(box, feature, Sense::kMaximize);
    if (outcome.status == SolveStatus::kInfeasible) return domain_.lower[feature];
    return std::min(ceiling, outcome.objective + options_.epsilon);
  }

  int calls() const { return calls_; }

 private:
  solver::SolveOutcome solve(const Box& box, int feature, Sense sense) {
    auto problem =
        encoding::build_entailment_problem(classifier_, domain_, box, negated_, options_.encoding);
    ++calls_;
    try {
      auto outcome = encoding::optimise_feature(std::move(problem), feature, sense, options_.solver);
      if (outcome.status == SolveStatus::kUnbounded) {
        throw SolverError("range optimisation reported an unbounded problem");
      }
      return outcome;
    } catch (const ResourceError& e) {
      throw ResourceError("inflation stopped at feature " + std::to_string(feature) + ": " +
                              e.what(),
                          e.incumbent(), e.incumbent_value());
    } catch (const SolverError& e) {
      throw SolverError("inflation stopped at feature " + std::to_string(feature) + ": " +
                        e.what());
    }
  }

  const Classifier& classifier_;
  const Domain& domain_;
  InflateOptions options_;
  encoding::NegatedPrediction negated_;
  int calls_ = 0;
};

InflatedExplanation make_result(const AbductiveExplanation& explanation, InflationMethod method,
                                double parameter, const InflateOptions& options) {
  InflatedExplanation result;
  result.instance = explanation.instance;
  result.predicted = explanation.predicted;
  result.method = method;
  result.epsilon = options.epsilon;
  result.tau = options.tau;
  result.parameter = parameter;
  return result;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

InflatedExplanation onestep(const Classifier& classifier, const Domain& domain,
                            const AbductiveExplanation& explanation,
                            const InflateOptions& options) {
  const auto start = Clock::now();
  check_inputs(classifier, domain, explanation, options);
  auto result = make_result(explanation, InflationMethod::kOnestep, 0.0, options);
  RangeSearch search(classifier, domain, explanation.predicted, options);

  Box box = pinned_box(domain, explanation);
  for (const auto& [feature, value] : explanation.features) {
    const double upper = search.upper(box, feature, value, value);
    const double lower = search.lower(box, feature, value, value);
    box.lower[feature] = lower;
    box.upper[feature] = upper;
    result.ranges.push_back({feature, lower, upper});
  }
  result.solver_calls = search.calls();
  result.seconds = seconds_since(start);
  return result;
}

TwostepTrace twostep_trace(const Classifier& classifier, const Domain& domain,
                           const AbductiveExplanation& explanation, double p,
                           const InflateOptions& options) {
  const auto start = Clock::now();
  check_inputs(classifier, domain, explanation, options);
  if (!(p > 0.0 && p <= 1.0)) throw InputError("twostep parameter p must lie in (0, 1]");
  TwostepTrace trace;
  trace.result = make_result(explanation, InflationMethod::kTwostep, p, options);
  RangeSearch search(classifier, domain, explanation.predicted, options);

  // Pass 1: onestep ranges, each shrunk towards the instance value before the
  // next feature is processed.
  Box box = pinned_box(domain, explanation);
  for (const auto& [feature, value] : explanation.features) {
    const double upper = search.upper(box, feature, value, value);
    const double lower = search.lower(box, feature, value, value);
    trace.first_pass.push_back({feature, lower, upper});
    const double sub_lower = std::clamp(value - (value - lower) * p, lower, value);
    const double sub_upper = std::clamp(value + (upper - value) * p, value, upper);
    trace.subranges.push_back({feature, sub_lower, sub_upper});
    box.lower[feature] = sub_lower;
    box.upper[feature] = sub_upper;
  }

  // Pass 2: re-expand outward from each subrange. The subrange box is sound,
  // so results never fall back inside it.
  for (const auto& [feature, sub_lower, sub_upper] : trace.subranges) {
    const double upper = search.upper(box, feature, sub_upper, sub_upper);
    const double lower = search.lower(box, feature, sub_lower, sub_lower);
    box.lower[feature] = lower;
    box.upper[feature] = upper;
    trace.result.ranges.push_back({feature, lower, upper});
  }
  trace.result.solver_calls = search.calls();
  trace.result.seconds = seconds_since(start);
  return trace;
}

InflatedExplanation twostep(const Classifier& classifier, const Domain& domain,
                            const AbductiveExplanation& explanation, double p,
                            const InflateOptions& options) {
  return twostep_trace(classifier, domain, explanation, p, options).result;
}

IncrementalBound extend_bound_incrementally(const Classifier& classifier, const Domain& domain,
                                            Box box, int feature, double start, double limit,
                                            double delta,
                                            Direction direction,
                                            const encoding::NegatedPrediction& negated,
                                            const InflateOptions& options) {
  if (!(delta > 0.0)) throw InputError("incremental step delta must be positive");
  IncrementalBound result{start, 0};
  const double sign = direction == Direction::kUp ? 1.0 : -1.0;
  for (int step = 1;; ++step) {
    if (result.bound == limit) break;
    double candidate = start + sign * delta * step;
    candidate = direction == Direction::kUp ? std::min(candidate, limit) : std::max(candidate, limit);
    if (direction == Direction::kUp) {
      box.lower[feature] = start;
      box.upper[feature] = candidate;
    } else {
      box.lower[feature] = candidate;
      box.upper[feature] = start;
    }
    const auto problem =
        encoding::build_entailment_problem(classifier, domain, box, negated, options.encoding);
    const auto outcome = encoding::solve_entailment(problem, options.solver);
    ++result.checks;
    if (outcome.status != solver::SolveStatus::kInfeasible) break;
    result.bound = candidate;
  }
  return result;
}

InflatedExplanation incremental_inflate(const Classifier& classifier, const Domain& domain,
                                        const AbductiveExplanation& explanation, double delta,
                                        const InflateOptions& options) {
  const auto start = Clock::now();
  check_inputs(classifier, domain, explanation, options);
  if (!(delta > 0.0)) throw InputError("incremental step delta must be positive");
  auto result = make_result(explanation, InflationMethod::kIncremental, delta, options);
  const auto negated =
      encoding::encode_negated_prediction(classifier, explanation.predicted, options.tau);

  Box box = pinned_box(domain, explanation);
  for (const auto& [feature, value] : explanation.features) {
    const auto up = extend_bound_incrementally(classifier, domain, box, feature, value,
                                               domain.upper[feature], delta, Direction::kUp,
                                               negated, options);
    const auto down = extend_bound_incrementally(classifier, domain, box, feature, value,
                                                 domain.lower[feature], delta, Direction::kDown,
                                                 negated, options);
    box.lower[feature] = down.bound;
    box.upper[feature] = up.bound;
    result.ranges.push_back({feature, down.bound, up.bound});
    result.solver_calls += up.checks + down.checks;
  }
  result.seconds = seconds_since(start);
  return result;
}

}  // namespace xpinflate
