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

#include "xpinflate/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "xpinflate/random.hpp"

namespace xpinflate::metrics {
namespace {

bool covers(const InflatedExplanation& explanation, const Vector& point) {
  for (const auto& range : explanation.ranges) {
    if (range.feature >= point.size() || !range.contains(point[range.feature])) return false;
  }
  return true;
}

}  // namespace

std::size_t dataset_coverage(const InflatedExplanation& explanation,
                             const std::vector<Instance>& population) {
  return static_cast<std::size_t>(std::count_if(
      population.begin(), population.end(),
      [&](const Instance& instance) { return covers(explanation, instance.values); }));
}

SyntheticBatch generate_synthetic(const Vector& x, double radius, std::size_t count,
                                  std::uint64_t seed, const Domain& domain, std::uint64_t stream) {
  if (!(radius >= 0.0)) throw InputError("perturbation radius must be non-negative");
  check_dimension(domain.size(), x);
  SyntheticBatch batch{x, radius, count, seed, stream, {}};
  batch.points.reserve(count);
  CounterRng rng(seed, stream);
  const Vector lo = (x.array() - radius).max(domain.lower.array());
  const Vector hi = (x.array() + radius).min(domain.upper.array());
  for (std::size_t k = 0; k < count; ++k) {
    Vector point(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) point[i] = rng.uniform(lo[i], hi[i]);
    batch.points.push_back(std::move(point));
  }
  return batch;
}

std::size_t synthetic_coverage(const InflatedExplanation& explanation, const SyntheticBatch& batch) {
  return static_cast<std::size_t>(
      std::count_if(batch.points.begin(), batch.points.end(),
                    [&](const Vector& point) { return covers(explanation, point); }));
}

double range_width(const InflatedExplanation& explanation) {
  if (explanation.ranges.empty()) return 0.0;
  double total = 0.0;
  for (const auto& range : explanation.ranges) total += range.width();
  return total / static_cast<double>(explanation.ranges.size());
}

std::optional<double> improvement_percent(std::size_t base, std::size_t other) {
  if (base == 0) {
    if (other == 0) return 0.0;
    return std::nullopt;
  }
  return 100.0 * (static_cast<double>(other) - static_cast<double>(base)) /
         static_cast<double>(base);
}

ImprovementHistogram improvement_histogram(const std::vector<std::optional<double>>& values) {
  ImprovementHistogram h;
  h.labels = {"<0", "0", "(0,25]", "(25,50]", "(50,75]", "(75,100]", ">100"};
  h.counts.assign(h.labels.size(), 0);
  for (const auto& v : values) {
    if (!v) {
      ++h.undefined;
      continue;
    }
    const double x = *v;
    std::size_t bin = 0;
    if (x < 0.0) bin = 0;
    else if (x == 0.0) bin = 1;
    else if (x <= 25.0) bin = 2;
    else if (x <= 50.0) bin = 3;
    else if (x <= 75.0) bin = 4;
    else if (x <= 100.0) bin = 5;
    else bin = 6;
    ++h.counts[bin];
  }
  return h;
}

std::string MethodSpec::name() const {
  if (method == InflationMethod::kOnestep) return "onestep";
  std::ostringstream out;
  out << to_string(method) << ':' << parameter;
  return out.str();
}

MethodSpec parse_method(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  MethodSpec spec;
  if (head == "onestep") {
    spec.method = InflationMethod::kOnestep;
    if (colon != std::string::npos) throw InputError("onestep takes no parameter: '" + text + "'");
    return spec;
  }
  if (head == "twostep") {
    spec.method = InflationMethod::kTwostep;
  } else if (head == "incremental") {
    spec.method = InflationMethod::kIncremental;
  } else {
    throw InputError("unknown inflation method '" + head + "'");
  }
  if (colon == std::string::npos) throw InputError("method '" + head + "' needs a parameter");
  try {
    std::size_t used = 0;
    const std::string tail = text.substr(colon + 1);
    spec.parameter = std::stod(tail, &used);
    if (used != tail.size()) throw std::invalid_argument(tail);
  } catch (const std::exception&) {
    throw InputError("invalid method parameter in '" + text + "'");
  }
  return spec;
}

namespace {

InflatedExplanation run_method(const Classifier& classifier, const Domain& domain,
                               const AbductiveExplanation& axp, const MethodSpec& spec,
                               const InflateOptions& options) {
  switch (spec.method) {
    case InflationMethod::kOnestep: return onestep(classifier, domain, axp, options);
    case InflationMethod::kTwostep: return twostep(classifier, domain, axp, spec.parameter, options);
    case InflationMethod::kIncremental:
      return incremental_inflate(classifier, domain, axp, spec.parameter, options);
  }
  throw InputError("unknown inflation method");
}

std::vector<EvaluationRecord> evaluate_instance(const Classifier& classifier, const Domain& domain,
                                                const Instance& instance,
                                                const std::vector<Instance>& population,
                                                const std::vector<MethodSpec>& methods,
                                                const EvaluationOptions& options) {
  std::vector<EvaluationRecord> records;
  auto error_rows = [&](const std::string& message) {
    for (const auto& spec : methods) {
      EvaluationRecord r;
      r.instance_id = instance.id;
      r.method = to_string(spec.method);
      r.parameter = spec.parameter;
      r.status = "error: " + message;
      records.push_back(r);
    }
    return records;
  };

  AbductiveExplanation axp;
  double explain_seconds = 0.0;
  try {
    const auto start = std::chrono::steady_clock::now();
    axp = abductive_explanation(classifier, instance.values, domain, options.explain);
    explain_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  } catch (const std::exception& e) {
    return error_rows(e.what());
  }

  const auto batch = generate_synthetic(instance.values, options.synthetic_radius,
                                        options.synthetic_count, options.seed, domain, instance.id);
  for (const auto& spec : methods) {
    EvaluationRecord r;
    r.instance_id = instance.id;
    r.method = to_string(spec.method);
    r.parameter = spec.parameter;
    r.explanation_features = axp.features.size();
    try {
      const auto box = run_method(classifier, domain, axp, spec, options.inflate);
      r.seconds = explain_seconds + box.seconds;
      r.mean_range_width = range_width(box);
      r.dataset_coverage = dataset_coverage(box, population);
      r.synthetic_coverage = synthetic_coverage(box, batch);
      r.solver_calls = box.solver_calls;
    } catch (const std::exception& e) {
      r.status = std::string("error: ") + e.what();
    }
    records.push_back(r);
  }
  return records;
}

}  // namespace

std::vector<EvaluationRecord> run_evaluation(const Classifier& classifier, const Domain& domain,
                                             const std::vector<Instance>& test,
                                             const std::vector<Instance>& population,
                                             const std::vector<MethodSpec>& methods,
                                             const EvaluationOptions& options) {
  std::vector<std::vector<EvaluationRecord>> per_instance(test.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < test.size(); k = next++) {
      per_instance[k] =
          evaluate_instance(classifier, domain, test[k], population, methods, options);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, test.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::vector<EvaluationRecord> records;
  for (auto& rows : per_instance) {
    for (auto& r : rows) records.push_back(std::move(r));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return a.instance_id < b.instance_id; });
  return records;
}

}  // namespace xpinflate::metrics
