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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xpinflate/explain.hpp"
#include "xpinflate/explanation.hpp"
#include "xpinflate/inflate.hpp"
#include "xpinflate/models.hpp"

namespace xpinflate::metrics {

// Instances whose boxed features all lie inside their ranges. Unboxed
// features are unconstrained.
std::size_t dataset_coverage(const InflatedExplanation& explanation,
                             const std::vector<Instance>& population);

struct SyntheticBatch {
  Vector source;
  double radius = 0.1;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<Vector> points;
};

// Each coordinate uniform over [v_i - d, v_i + d] intersected with the domain.
SyntheticBatch generate_synthetic(const Vector& x, double radius, std::size_t count,
                                  std::uint64_t seed, const Domain& domain,
                                  std::uint64_t stream = 0);

std::size_t synthetic_coverage(const InflatedExplanation& explanation, const SyntheticBatch& batch);

// Mean of (upper - lower) over the explanation's features; 0 when empty.
double range_width(const InflatedExplanation& explanation);

// 100 * (other - base) / base. nullopt flags base == 0 < other.
std::optional<double> improvement_percent(std::size_t base, std::size_t other);

struct ImprovementHistogram {
  std::vector<std::string> labels;
  std::vector<std::size_t> counts;
  std::size_t undefined = 0;
};

ImprovementHistogram improvement_histogram(const std::vector<std::optional<double>>& values);

struct MethodSpec {
  InflationMethod method = InflationMethod::kOnestep;
  double parameter = 0.0;  // p for twostep, delta for incremental

  std::string name() const;
};

// Parses "onestep", "twostep:0.25" or "incremental:0.05".
MethodSpec parse_method(const std::string& text);

struct EvaluationOptions {
  ExplainOptions explain;
  InflateOptions inflate;
  double synthetic_radius = 0.1;
  std::size_t synthetic_count = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct EvaluationRecord {
  std::size_t instance_id = 0;
  std::string method;
  double parameter = 0.0;
  double seconds = 0.0;
  std::size_t explanation_features = 0;
  double mean_range_width = 0.0;
  std::size_t dataset_coverage = 0;
  std::size_t synthetic_coverage = 0;
  int solver_calls = 0;
  std::string status = "ok";
};

// One abductive explanation per test instance, then every method on top of
// it. Per-instance failures become error records. Output is ordered by
// instance id, then by method order.
std::vector<EvaluationRecord> run_evaluation(const Classifier& classifier, const Domain& domain,
                                             const std::vector<Instance>& test,
                                             const std::vector<Instance>& population,
                                             const std::vector<MethodSpec>& methods,
                                             const EvaluationOptions& options = {});

}  // namespace xpinflate::metrics
